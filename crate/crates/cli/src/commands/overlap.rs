use crate::args::{GlobalArgs, OverlapArgs};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, RunContext};
use multiplet_core::grid::AxisRange;
use multiplet_core::higher_order::{overlap_scan, ScanOptions, Truncation, ADAPTIVE_START};
use serde_json::json;

pub fn run(global: &GlobalArgs, args: &OverlapArgs) -> CliResult<()> {
    if args.ordinary.order != 2 {
        return Err(CliError::Usage(format!(
            "--ordinary must be a p=2 member, got p={}",
            args.ordinary.order
        )));
    }
    let rp = match args.rp {
        Some(rp) => rp,
        None if args.higher.order == 4 => AxisRange::new(0.0, 0.4, 60)?,
        None => AxisRange::new(0.0, 0.6, 60)?,
    };
    let n_max = global.nmax.unwrap_or(ADAPTIVE_START);
    let opts = ScanOptions {
        truncation: Truncation::Fixed(n_max),
        check_doubling: args.check_doubling,
        refine: !args.no_refine,
    };
    let ordinary = args.ordinary.at(0.0)?;
    let higher = args.higher.at(0.0)?;

    let tag = args
        .tag
        .clone()
        .unwrap_or_else(|| format!("{}_{}", args.ordinary.tag(), args.higher.tag()));
    let mut params = serde_json::to_value(args)?;
    params["rp"] = serde_json::to_value(rp)?;
    let ctx = RunContext::new(
        "overlap-scan",
        params,
        json!({"higher_order_n_max": n_max, "ordinary": "multiplet_nmax(r)"}),
        &global.out_dir,
    )?;
    let res = overlap_scan(&ordinary, &higher, &args.r.values(), &rp.values(), opts)?;
    let summary = json!({
        "dropped_r": res.dropped_r,
        "dropped_rp": res.dropped_rp,
        "doubling_delta": res.doubling_delta,
    });

    let cells = res.r_axis.iter().enumerate().flat_map(|(i, &r)| {
        let row = &res.values[i];
        res.rp_axis
            .iter()
            .zip(row)
            .map(move |(&rp, &v)| vec![Cell::Num(r), Cell::Num(rp), Cell::Num(v)])
    });
    let grid = ctx.write_csv(&format!("overlap_{tag}.csv"), &["r", "r_p", "overlap"], summary.clone(), cells)?;
    let curve = ctx.write_csv(
        &format!("maxcurve_{tag}.csv"),
        &["r_p", "r_star", "overlap_star"],
        summary,
        res.max_curve
            .iter()
            .map(|m| vec![Cell::Num(m.r_p), Cell::Num(m.r_star), Cell::Num(m.overlap)]),
    )?;

    println!("wrote {}", grid.display());
    println!("wrote {}", curve.display());
    if let Some(delta) = res.doubling_delta {
        println!("truncation doubling {n_max} -> {}: max overlap change {delta:.3e}", 2 * n_max);
    }
    Ok(())
}
