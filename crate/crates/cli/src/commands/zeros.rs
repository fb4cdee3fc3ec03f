use crate::args::{GlobalArgs, ZeroArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num_tag, Cell, RunContext};
use multiplet_core::phase_space::{zero_ring_scan_with, CharFunction, RING_JUMP};
use multiplet_core::MultipletSpec;
use serde_json::json;

pub fn run(global: &GlobalArgs, args: &ZeroArgs) -> CliResult<()> {
    if !(args.step > 0.0) || !(args.rmax > 0.0) {
        return Err(CliError::Usage("--step and --rmax must be positive".into()));
    }
    let mut on_axis = Vec::new();
    for &r in &args.strengths {
        let spec = MultipletSpec::ordinary(args.size, args.member, r)?;
        let mut ctx = RunContext::new("zero-scan", args, json!({"engine": "analytic"}), &global.out_dir)?;
        let cf = CharFunction::new(&spec)?;
        let scan = zero_ring_scan_with(&cf, args.rays, args.rmax, args.step)?;
        let verdict = if scan.closed_ring { "yes" } else { "no" };

        ctx.set_parameter("strength", json!(r));
        let summary = json!({
            "ring": verdict,
            "max_jump": if scan.max_jump.is_finite() { json!(scan.max_jump) } else { json!(null) },
            "ring_jump_limit": RING_JUMP,
        });
        let rows = scan.rays.iter().map(|z| {
            vec![
                Cell::Num(z.angle),
                z.radius.map_or(Cell::Missing, Cell::Num),
                Cell::Flag(z.radius.is_some()),
            ]
        });
        let name = format!("zeros_D{}_m{}_r{}.csv", args.size, args.member, num_tag(r));
        let path = ctx.write_csv(&name, &["ray_angle", "first_zero_radius", "has_zero"], summary, rows)?;
        println!("wrote {}", path.display());
        println!("{spec}: ring: {verdict}");
        on_axis.push((r, scan.radius_at(0)));
    }

    if on_axis.len() > 1 {
        let shown: Vec<String> = on_axis
            .iter()
            .map(|(r, z)| format!("r={r}: {}", z.map_or("none".to_string(), |v| format!("{v:.6}"))))
            .collect();
        println!("first zero at phi=0: {}", shown.join(", "));
        let decreasing = on_axis.iter().all(|(_, z)| z.is_some())
            && on_axis.windows(2).all(|w| w[1].1.unwrap() < w[0].1.unwrap());
        println!("strictly decreasing: {}", if decreasing { "yes" } else { "no" });
    }
    Ok(())
}
