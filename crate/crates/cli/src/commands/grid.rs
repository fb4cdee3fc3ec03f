use crate::args::{Engine, GlobalArgs, GridArgs, Quadrant};
use crate::error::{CliError, CliResult};
use crate::output::{num_tag, Cell, RunContext};
use multiplet_core::grid::{linspace, Grid2D};
use multiplet_core::higher_order::{member_state, Truncation, ADAPTIVE_START};
use multiplet_core::multiplet::multiplet_nmax;
use multiplet_core::oracle::{char_numeric, wigner_numeric, OracleConfig};
use multiplet_core::phase_space::{CharFunction, CharTermBreakdown, DiagonalForm};
use multiplet_core::{ComplexAmplitude, FockVector, MultipletSpec};
use serde_json::{json, Value};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Char,
    Wigner,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Char => "char",
            Kind::Wigner => "wigner",
        }
    }

    fn column(self) -> &'static str {
        match self {
            Kind::Char => "C",
            Kind::Wigner => "W",
        }
    }

    /// Point at which the characteristic function is needed for this kind.
    fn char_point(self, a: ComplexAmplitude) -> ComplexAmplitude {
        match self {
            Kind::Char => a,
            Kind::Wigner => a.scale(2.0),
        }
    }

    fn value_from_char(self, c: f64) -> f64 {
        match self {
            Kind::Char => c,
            Kind::Wigner => c / PI,
        }
    }
}

fn axes(args: &GridArgs) -> CliResult<(Vec<f64>, Vec<f64>)> {
    if args.res == 0 {
        return Err(CliError::Usage("--res must be at least 1".into()));
    }
    if !(args.range > 0.0) || !args.range.is_finite() {
        return Err(CliError::Usage(format!("--range must be positive, got {}", args.range)));
    }
    if args.res == 1 {
        return Ok((vec![0.0], vec![0.0]));
    }
    let h = args.range;
    let (x, p) = match args.quadrant {
        Quadrant::Full => ((-h, h), (-h, h)),
        Quadrant::UpperRight => ((0.0, h), (0.0, h)),
        Quadrant::UpperLeft => ((-h, 0.0), (0.0, h)),
        Quadrant::LowerLeft => ((-h, 0.0), (-h, 0.0)),
        Quadrant::LowerRight => ((0.0, h), (-h, 0.0)),
    };
    Ok((linspace(x.0, x.1, args.res), linspace(p.0, p.1, args.res)))
}

fn file_stem(kind: Kind, spec: &MultipletSpec) -> String {
    let order = if spec.order() == 2 { String::new() } else { format!("p{}_", spec.order()) };
    format!(
        "{}_{order}D{}_m{}_r{}",
        kind.name(),
        spec.size(),
        spec.member(),
        num_tag(spec.strength())
    )
}

fn grid_rows(g: &Grid2D) -> impl Iterator<Item = Vec<Cell>> + '_ {
    g.points().map(|(x, p, v)| vec![Cell::Num(x), Cell::Num(p), Cell::Num(v)])
}

fn grid_summary(g: &Grid2D) -> Value {
    json!({"min": g.min(), "max": g.max(), "points": g.values.len()})
}

pub fn run(global: &GlobalArgs, args: &GridArgs, kind: Kind) -> CliResult<()> {
    let (x_axis, p_axis) = axes(args)?;
    match args.engine {
        Engine::Analytic if args.order != 2 => {
            return Err(CliError::Usage("analytic engine is p=2 only".into()));
        }
        Engine::Numeric if args.breakdown => {
            return Err(CliError::Usage("--breakdown needs the analytic engine".into()));
        }
        Engine::Numeric if args.use_paper_exponents => {
            return Err(CliError::Usage("--use-paper-exponents applies to the analytic engine only".into()));
        }
        _ => {}
    }
    let specs = args
        .strengths
        .iter()
        .map(|&r| MultipletSpec::new(args.order, args.size, args.member, r))
        .collect::<Result<Vec<_>, _>>()?;
    let form = if args.use_paper_exponents {
        DiagonalForm::Unsquared
    } else {
        DiagonalForm::Squared
    };
    let reach = x_axis
        .iter()
        .flat_map(|&x| p_axis.iter().map(move |&p| x.hypot(p)))
        .fold(0.0, f64::max);

    for spec in &specs {
        let stem = file_stem(kind, spec);
        let mut ctx = RunContext::new(&format!("{}-grid", kind.name()), args, Value::Null, &global.out_dir)?;
        let (grid, truncation, breakdown) = match args.engine {
            Engine::Analytic => {
                let cf = CharFunction::with_form(spec, form)?;
                let eval = |a: ComplexAmplitude| -> multiplet_core::Result<f64> {
                    let z = kind.char_point(a);
                    let c = match form {
                        DiagonalForm::Squared => cf.evaluate(z)?,
                        // the unsquared form is not a valid state; keep its real part
                        DiagonalForm::Unsquared => cf.evaluate_complex(z).re,
                    };
                    Ok(kind.value_from_char(c))
                };
                let grid = Grid2D::evaluate(kind.column(), x_axis.clone(), p_axis.clone(), eval)?;
                let breakdown = if args.breakdown {
                    Some(breakdown_grids(&cf, kind, &x_axis, &p_axis)?)
                } else {
                    None
                };
                (grid, json!({"engine": "analytic", "precise": cf.is_precise()}), breakdown)
            }
            Engine::Numeric => {
                let (state, cfg) = numeric_setup(global, spec, kind, reach)?;
                let eval = |a: ComplexAmplitude| -> multiplet_core::Result<f64> {
                    match kind {
                        Kind::Char => Ok(char_numeric(&state, a, &cfg)?.re),
                        Kind::Wigner => wigner_numeric(&state, a, &cfg),
                    }
                };
                let grid = Grid2D::evaluate(kind.column(), x_axis.clone(), p_axis.clone(), eval)?;
                let trunc = json!({
                    "engine": "numeric",
                    "state_n_max": state.n_max(),
                    "state_tail_mass": state.tail_mass(multiplet_core::tol::LEAK_MARGIN),
                    "oracle_n_max": cfg.n_max,
                });
                (grid, trunc, None)
            }
        };

        ctx.truncation = truncation;
        ctx.set_parameter("strength", json!(spec.strength()));
        let columns = ["x", "p", kind.column()];
        let path = ctx.write_csv(&format!("{stem}.csv"), &columns, grid_summary(&grid), grid_rows(&grid))?;
        println!("wrote {}", path.display());

        if let Some(parts) = breakdown {
            for (suffix, g) in parts {
                let path = ctx.write_csv(&format!("{stem}_{suffix}.csv"), &columns, grid_summary(&g), grid_rows(&g))?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

/// One grid per diagonal term (`diag<b>`) and per pair term (`pair<a>-<b>`).
fn breakdown_grids(cf: &CharFunction, kind: Kind, x_axis: &[f64], p_axis: &[f64]) -> CliResult<Vec<(String, Grid2D)>> {
    let points: Vec<ComplexAmplitude> = p_axis
        .iter()
        .flat_map(|&p| x_axis.iter().map(move |&x| ComplexAmplitude::new(x, p)))
        .collect();
    let parts: Vec<CharTermBreakdown> = points
        .iter()
        .map(|&a| cf.breakdown(kind.char_point(a)))
        .collect::<Result<_, _>>()?;
    let Some(first) = parts.first() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let build = |label: String, pick: &dyn Fn(&CharTermBreakdown) -> f64| Grid2D {
        label,
        x_axis: x_axis.to_vec(),
        p_axis: p_axis.to_vec(),
        values: parts.iter().map(|b| kind.value_from_char(pick(b))).collect(),
    };
    for b in 0..first.diag_terms.len() {
        out.push((format!("diag{b}"), build(format!("diag{b}"), &|t| t.diag_terms[b])));
    }
    for (k, &(a, b, _)) in first.pair_terms.iter().enumerate() {
        out.push((format!("pair{a}-{b}"), build(format!("pair{a}-{b}"), &|t| t.pair_terms[k].2)));
    }
    Ok(out)
}

fn numeric_setup(
    global: &GlobalArgs,
    spec: &MultipletSpec,
    kind: Kind,
    reach: f64,
) -> CliResult<(FockVector, OracleConfig)> {
    let state = if spec.order() == 2 {
        member_state(spec, Truncation::Fixed(multiplet_nmax(spec)?))?
    } else {
        member_state(spec, Truncation::Fixed(global.nmax.unwrap_or(ADAPTIVE_START)))?
    };
    // |alpha|^2 <= 0.5 n_max, with the Wigner budget halved
    let factor = match kind {
        Kind::Char => 2.0,
        Kind::Wigner => 8.0,
    };
    let needed = (factor * reach * reach / 0.998).ceil() as usize + 1;
    if spec.order() == 2 {
        let n_max = global.nmax.unwrap_or(needed.max(state.n_max() + multiplet_core::tol::LEAK_MARGIN));
        return Ok((state, OracleConfig::new(n_max)));
    }
    // A fixed-truncation higher-order state is defined by that truncation, so
    // its top levels may carry weight. Keep every level inside the accurate
    // block of the displacement matrix instead of asking for a vanishing tail.
    let mut cfg = OracleConfig::new(state.n_max() + needed + multiplet_core::tol::LEAK_MARGIN);
    cfg.leak_tol = f64::INFINITY;
    Ok((state, cfg))
}
