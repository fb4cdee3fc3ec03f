use crate::args::{GlobalArgs, ValidateArgs};
use crate::error::{CliError, CliResult};
use multiplet_core::fock::inner;
use multiplet_core::grid::linspace;
use multiplet_core::higher_order::{higher_multiplet_state, Truncation, ADAPTIVE_START};
use multiplet_core::multiplet::{multiplet_nmax, multiplet_state, support_violation, verify_rotation_eigenstate};
use multiplet_core::oracle::{char_numeric, wigner_numeric, Displaced, OracleConfig, SparseState};
use multiplet_core::phase_space::{d2_closed_form, CharFunction, DiagonalForm};
use multiplet_core::{ComplexAmplitude, Complex64, FockVector, MultipletSpec};
use std::f64::consts::PI;
use std::time::Instant;

struct Scale {
    max_size: usize,
    strengths: &'static [f64],
    oracle_points: usize,
    symmetry_points: usize,
}

const FULL: Scale = Scale {
    max_size: 5,
    strengths: &[0.3, 0.8, 1.5],
    oracle_points: 25,
    symmetry_points: 400,
};

const QUICK: Scale = Scale {
    max_size: 3,
    strengths: &[0.3, 1.0],
    oracle_points: 9,
    symmetry_points: 100,
};

struct Check {
    name: &'static str,
    worst: f64,
    tol: f64,
}

impl Check {
    fn below(name: &'static str, worst: f64, tol: f64) -> Self {
        Check { name, worst, tol }
    }

    fn passed(&self) -> bool {
        self.worst < self.tol
    }
}

fn members(scale: &Scale) -> CliResult<Vec<MultipletSpec>> {
    let mut out = Vec::new();
    for d in 1..=scale.max_size {
        for m in 0..d {
            for &r in scale.strengths {
                out.push(MultipletSpec::ordinary(d, m, r)?);
            }
        }
    }
    Ok(out)
}

/// Deterministic points filling the disc of radius `radius` (sunflower spiral).
fn spiral(n: usize, radius: f64) -> impl Iterator<Item = ComplexAmplitude> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n).map(move |k| {
        let t = radius * ((k as f64 + 0.5) / n as f64).sqrt();
        ComplexAmplitude::from_polar(t, golden * k as f64)
    })
}

fn gram_defect(states: &[FockVector]) -> CliResult<f64> {
    let n = states.iter().map(FockVector::n_max).max().unwrap_or(0);
    let padded: Vec<FockVector> = states.iter().map(|s| s.resized(n)).collect();
    let mut worst = 0.0f64;
    for (i, a) in padded.iter().enumerate() {
        for (j, b) in padded.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(a, b)? - target).norm());
        }
    }
    Ok(worst)
}

pub fn run(_global: &GlobalArgs, args: &ValidateArgs) -> CliResult<()> {
    let started = Instant::now();
    let scale = if args.quick { &QUICK } else { &FULL };
    let specs = members(scale)?;
    let mut checks = Vec::new();

    // normalization and structure of ordinary members
    let mut c0 = 0.0f64;
    let (mut gram, mut eig, mut supp) = (0.0f64, 0.0f64, 0.0f64);
    let mut states = Vec::with_capacity(specs.len());
    for d in 1..=scale.max_size {
        for &r in scale.strengths {
            let group: Vec<MultipletSpec> = specs.iter().filter(|s| s.size() == d && s.strength() == r).copied().collect();
            let n = group.iter().map(multiplet_nmax).collect::<Result<Vec<_>, _>>()?.into_iter().max().unwrap_or(40);
            let mut built = Vec::new();
            for spec in &group {
                let s = multiplet_state(spec, n)?;
                eig = eig.max(verify_rotation_eigenstate(&s, spec));
                supp = supp.max(support_violation(&s, &spec.support()));
                c0 = c0.max((CharFunction::new(spec)?.evaluate(ComplexAmplitude::ZERO)? - 1.0).abs());
                built.push(s);
            }
            gram = gram.max(gram_defect(&built)?);
            states.extend(group.into_iter().zip(built));
        }
    }
    checks.push(Check::below("C(0) = 1", c0, 1e-10));
    checks.push(Check::below("Gram matrix = I (p=2)", gram, 1e-9));
    checks.push(Check::below("rotation eigenvalue (p=2)", eig, 1e-9));
    checks.push(Check::below("photon support (p=2)", supp, 1e-12));

    // higher-order members at a fixed truncation
    let (mut h_gram, mut h_eig, mut h_supp) = (0.0f64, 0.0f64, 0.0f64);
    for p in 3..=4u32 {
        for d in 1..=scale.max_size.min(4) {
            let built = (0..d)
                .map(|m| {
                    let spec = MultipletSpec::new(p, d, m, 0.1)?;
                    let s = higher_multiplet_state(&spec, Truncation::Fixed(ADAPTIVE_START))?;
                    h_eig = h_eig.max(verify_rotation_eigenstate(&s, &spec));
                    h_supp = h_supp.max(support_violation(&s, &spec.support()));
                    Ok(s)
                })
                .collect::<CliResult<Vec<_>>>()?;
            h_gram = h_gram.max(gram_defect(&built)?);
        }
    }
    checks.push(Check::below("Gram matrix = I (p=3,4)", h_gram, 1e-8));
    checks.push(Check::below("rotation eigenvalue (p=3,4)", h_eig, 1e-9));
    checks.push(Check::below("photon support (p=3,4)", h_supp, 1e-12));

    // symmetries of the analytic characteristic function
    let (mut rot, mut refl) = (0.0f64, 0.0f64);
    for spec in &specs {
        let cf = CharFunction::new(spec)?;
        for a in spiral(scale.symmetry_points, 6.0) {
            let c = cf.evaluate(a)?;
            rot = rot.max((c - cf.evaluate(a.rotate(-PI / spec.size() as f64))?).abs());
            refl = refl.max((c - cf.evaluate(a.conj())?).abs());
        }
    }
    checks.push(Check::below("C rotation by pi/D", rot, 1e-12));
    checks.push(Check::below("C reflection p -> -p", refl, 1e-12));

    // doublet closed form
    let mut d2 = 0.0f64;
    for m in 0..2 {
        for &r in scale.strengths {
            let cf = CharFunction::new(&MultipletSpec::ordinary(2, m, r)?)?;
            for a in spiral(scale.symmetry_points, 6.0) {
                d2 = d2.max((d2_closed_form(m, r, a)? - cf.evaluate(a)?).abs());
            }
        }
    }
    checks.push(Check::below("doublet closed form", d2, 1e-12));

    // oracle equivalence
    let form = if args.use_paper_exponents {
        DiagonalForm::Unsquared
    } else {
        DiagonalForm::Squared
    };
    let n_state = states.iter().map(|(_, s)| s.n_max()).max().unwrap_or(40);
    let cfg = OracleConfig::new((n_state + 40).max(300));
    let sparse = states
        .iter()
        .map(|(_, s)| Ok(SparseState::from_vector(&cfg.admit(s)?, 1e-15)))
        .collect::<CliResult<Vec<_>>>()?;
    let analytic = states
        .iter()
        .map(|(s, _)| CharFunction::with_form(s, form))
        .collect::<Result<Vec<_>, _>>()?;
    let axis = linspace(-6.0, 6.0, scale.oracle_points);
    let mut oracle = 0.0f64;
    for &p in &axis {
        for &x in &axis {
            let a = ComplexAmplitude::new(x, p);
            let disp = Displaced::new(a, &cfg)?;
            for (st, cf) in sparse.iter().zip(&analytic) {
                oracle = oracle.max((cf.evaluate_complex(a) - disp.expectation(st)).norm());
            }
        }
    }
    let oracle_name = if args.use_paper_exponents {
        "oracle equivalence (unsquared exponent)"
    } else {
        "oracle equivalence"
    };
    checks.push(Check::below(oracle_name, oracle, 1e-8));

    // parity form of the Wigner function
    let mut parity = 0.0f64;
    for (_, s) in states.iter().step_by(3) {
        for a in spiral(8, 3.0) {
            let w = wigner_numeric(s, a, &cfg)?;
            let c = char_numeric(s, a.scale(2.0), &cfg)?;
            parity = parity.max((Complex64::new(PI * w, 0.0) - c).norm());
        }
    }
    checks.push(Check::below("pi W(a) = C(2a) (oracle)", parity, 1e-9));

    println!("{:<44} {:>11} {:>11}  status", "check", "worst", "tolerance");
    for c in &checks {
        let bound = format!("< {:.0e}", c.tol);
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!("{:<44} {:>11.3e} {:>11}  {status}", c.name, c.worst, bound);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    println!(
        "{} members, {} checks, {:.1} s",
        specs.len(),
        checks.len(),
        started.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        println!("all checks passed");
        Ok(())
    } else {
        Err(CliError::Validation(format!("failed: {}", failed.join(", "))))
    }
}
