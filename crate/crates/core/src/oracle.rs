//! Brute-force characteristic and Wigner functions from dense Fock-space
//! matrices. Shares nothing with [`phase_space`](crate::phase_space) beyond
//! the Fock-space primitives, so agreement between the two is meaningful.

use crate::error::{Error, Result};
use crate::fock::{displacement_op, ComplexAmplitude, FockVector, OperatorMatrix};
use crate::multiplet::squeezed_state;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct OracleConfig {
    pub n_max: usize,
    pub leak_tol: f64,
    /// Largest `|alpha|` accepted; `alpha_budget^2 < n_max / 2`.
    pub alpha_budget: f64,
}

impl OracleConfig {
    pub fn new(n_max: usize) -> Self {
        OracleConfig {
            n_max,
            leak_tol: crate::tol::LEAK,
            alpha_budget: 0.999 * (0.5 * n_max as f64).sqrt(),
        }
    }

    fn check_alpha(&self, alpha: ComplexAmplitude, budget: f64) -> Result<()> {
        if alpha.norm() > budget {
            return Err(Error::DisplacementBudget {
                alpha_sq: alpha.norm_sqr(),
                limit: budget * budget,
                n_max: self.n_max,
            });
        }
        Ok(())
    }

    /// Pads `state` to this truncation after checking its tail.
    pub fn admit(&self, state: &FockVector) -> Result<FockVector> {
        if state.n_max() > self.n_max {
            return Err(Error::TruncationMismatch {
                left: state.n_max(),
                right: self.n_max,
            });
        }
        let tail = state.tail_mass(crate::tol::LEAK_MARGIN);
        if tail >= self.leak_tol {
            return Err(Error::TailMass {
                tail,
                margin: crate::tol::LEAK_MARGIN,
                n_max: state.n_max(),
            });
        }
        Ok(state.resized(self.n_max))
    }
}

/// Nonzero entries of a state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    entries: Vec<(usize, Complex64)>,
}

impl SparseState {
    /// Keeps entries with magnitude above `drop_below` (use `0.0` to keep all
    /// nonzero entries).
    pub fn from_vector(v: &FockVector, drop_below: f64) -> Self {
        SparseState {
            entries: v
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > drop_below)
                .map(|(n, &c)| (n, c))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `D(alpha)` on the oracle truncation, reusable across many states.
pub struct Displaced {
    alpha: ComplexAmplitude,
    op: OperatorMatrix,
}

impl Displaced {
    pub fn new(alpha: ComplexAmplitude, cfg: &OracleConfig) -> Result<Self> {
        cfg.check_alpha(alpha, cfg.alpha_budget)?;
        Ok(Displaced {
            alpha,
            op: displacement_op(alpha, cfg.n_max)?,
        })
    }

    pub fn alpha(&self) -> ComplexAmplitude {
        self.alpha
    }

    pub fn op(&self) -> &OperatorMatrix {
        &self.op
    }

    /// `<bra| D(alpha) |ket>` over the stored entries.
    pub fn sandwich(&self, bra: &SparseState, ket: &SparseState) -> Complex64 {
        let m = self.op.entries();
        bra.entries
            .iter()
            .map(|&(i, b)| {
                let row: Complex64 = ket.entries.iter().map(|&(j, k)| m[(i, j)] * k).sum();
                b.conj() * row
            })
            .sum()
    }

    pub fn expectation(&self, state: &SparseState) -> Complex64 {
        self.sandwich(state, state)
    }

    /// `<psi| D(alpha) R D(alpha)^dagger |psi>` with `R` the photon-number parity.
    pub fn parity_expectation(&self, state: &SparseState) -> f64 {
        let m = self.op.entries();
        (0..m.nrows())
            .map(|n| {
                let amp: Complex64 = state.entries.iter().map(|&(k, c)| m[(k, n)].conj() * c).sum();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign * amp.norm_sqr()
            })
            .sum()
    }
}

/// `<psi| D(alpha) |psi>`.
pub fn char_numeric(state: &FockVector, alpha: ComplexAmplitude, cfg: &OracleConfig) -> Result<Complex64> {
    let state = SparseState::from_vector(&cfg.admit(state)?, 0.0);
    Ok(Displaced::new(alpha, cfg)?.expectation(&state))
}

/// `<psi| D(alpha) R D(alpha)^dagger |psi> / pi`. The budget is halved so the
/// result can be compared with [`char_numeric`] at `2 alpha`.
pub fn wigner_numeric(state: &FockVector, alpha: ComplexAmplitude, cfg: &OracleConfig) -> Result<f64> {
    cfg.check_alpha(alpha, 0.5 * cfg.alpha_budget)?;
    let state = SparseState::from_vector(&cfg.admit(state)?, 0.0);
    Ok(Displaced::new(alpha, cfg)?.parity_expectation(&state) / std::f64::consts::PI)
}

/// `<r, theta_a| D(alpha) |r, theta_b>` from truncated squeezed vacua.
pub fn overlap_numeric(
    r: f64,
    theta_a: f64,
    theta_b: f64,
    alpha: ComplexAmplitude,
    cfg: &OracleConfig,
) -> Result<Complex64> {
    let bra = SparseState::from_vector(&cfg.admit(&squeezed_state(r, theta_a, cfg.n_max)?)?, 0.0);
    let ket = SparseState::from_vector(&cfg.admit(&squeezed_state(r, theta_b, cfg.n_max)?)?, 0.0);
    Ok(Displaced::new(alpha, cfg)?.sandwich(&bra, &ket))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplet::{multiplet_state, MultipletSpec};
    use std::f64::consts::{PI, TAU};

    #[test]
    fn vacuum_values() {
        let cfg = OracleConfig::new(80);
        let vac = FockVector::vacuum(80);
        let a = ComplexAmplitude::new(1.2, -0.7);
        let c = char_numeric(&vac, a, &cfg).unwrap();
        assert!((c - (-0.5 * a.norm_sqr()).exp()).norm() < 1e-15);
        assert!((wigner_numeric(&vac, ComplexAmplitude::ZERO, &cfg).unwrap() - 1.0 / PI).abs() < 1e-15);
        let one = FockVector::basis(1, 80).unwrap();
        assert!((wigner_numeric(&one, ComplexAmplitude::ZERO, &cfg).unwrap() + 1.0 / PI).abs() < 1e-15);
        assert!((char_numeric(&one, ComplexAmplitude::ZERO, &cfg).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn overlap_at_origin_is_k() {
        let cfg = OracleConfig::new(300);
        let (r, ta) = (0.8, TAU / 3.0);
        let z = overlap_numeric(r, ta, 0.0, ComplexAmplitude::ZERO, &cfg).unwrap();
        let t2 = r.tanh().powi(2);
        let k = Complex64::new(1.0, 0.0)
            / (r.cosh() * (Complex64::new(1.0, 0.0) - Complex64::from_polar(t2, -ta)).sqrt());
        assert!((z - k).norm() < 1e-10);
    }

    #[test]
    fn overlap_conjugation_and_diagonal() {
        let cfg = OracleConfig::new(200);
        let a = ComplexAmplitude::new(0.6, -0.9);
        let ab = overlap_numeric(0.7, 2.0, 0.5, a, &cfg).unwrap();
        let ba = overlap_numeric(0.7, 0.5, 2.0, a, &cfg).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-12);
        let diag = overlap_numeric(0.7, 0.0, 0.0, ComplexAmplitude::new(0.0, 1.3), &cfg).unwrap();
        assert!(diag.re > 0.0 && diag.im.abs() < 1e-14);
    }

    #[test]
    fn wigner_is_char_at_double_amplitude() {
        let cfg = OracleConfig::new(200);
        let s = multiplet_state(&MultipletSpec::ordinary(3, 1, 0.8).unwrap(), 120).unwrap();
        for &(x, p) in &[(0.0, 0.0), (0.4, 0.3), (-1.1, 0.8)] {
            let a = ComplexAmplitude::new(x, p);
            let w = wigner_numeric(&s, a, &cfg).unwrap();
            let c = char_numeric(&s, a.scale(2.0), &cfg).unwrap();
            assert!((PI * w - c.re).abs() < 1e-9);
            assert!(c.im.abs() < 1e-10);
        }
    }

    #[test]
    fn hermiticity_and_truncation_stability() {
        let s = multiplet_state(&MultipletSpec::ordinary(2, 1, 0.5).unwrap(), 100).unwrap();
        let small = OracleConfig::new(150);
        let big = OracleConfig::new(300);
        let a = ComplexAmplitude::new(1.4, 0.6);
        let c = char_numeric(&s, a, &small).unwrap();
        let cm = char_numeric(&s, a.scale(-1.0), &small).unwrap();
        assert!((c - cm.conj()).norm() < 1e-12);
        assert!((c - char_numeric(&s, a, &big).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn budgets_enforced() {
        let cfg = OracleConfig::new(50);
        let vac = FockVector::vacuum(50);
        assert!(char_numeric(&vac, ComplexAmplitude::new(5.0, 0.0), &cfg).is_err());
        assert!(wigner_numeric(&vac, ComplexAmplitude::new(3.0, 0.0), &cfg).is_err());
        assert!(char_numeric(&FockVector::vacuum(60), ComplexAmplitude::ZERO, &cfg).is_err());
        let heavy = FockVector::basis(45, 50).unwrap();
        assert!(matches!(char_numeric(&heavy, ComplexAmplitude::ZERO, &cfg), Err(Error::TailMass { .. })));
    }
}
