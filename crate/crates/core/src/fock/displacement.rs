//! Displacement operator matrix elements from normalized associated Laguerre
//! functions.
//!
//! With `x = |alpha|^2`, `k = m - n >= 0` and
//! `f_n^(k)(x) = sqrt(n!/(n+k)!) x^(k/2) e^(-x/2) L_n^(k)(x)`,
//! `<m|D(alpha)|n> = e^(i k arg alpha) f_n^(k)(x)` and
//! `<n|D(alpha)|m> = (-1)^k e^(-i k arg alpha) f_n^(k)(x)`.
//! The functions obey a three-term recurrence in `n` that never forms a
//! factorial, so every element is accurate to a few ulps.

use super::{ComplexAmplitude, OperatorMatrix};
use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;

/// Largest `|alpha|^2` honoured at truncation `n_max`.
pub fn displacement_budget(n_max: usize) -> f64 {
    0.5 * n_max as f64
}

/// Number of leading columns of the truncated `D(alpha)` whose images stay
/// clear of the cut at `n_max`, so that those columns are orthonormal.
pub fn displacement_safe_block(alpha: ComplexAmplitude, n_max: usize) -> usize {
    let reach = (n_max as f64).sqrt() - alpha.norm() - 4.0;
    if reach <= 0.0 {
        return 1;
    }
    ((reach * reach).floor() as usize + 1).min(n_max + 1)
}

/// `D(alpha) = exp(alpha a^dagger - alpha^* a)` truncated to `n_max`.
pub fn displacement_op(alpha: ComplexAmplitude, n_max: usize) -> Result<OperatorMatrix> {
    let x = alpha.norm_sqr();
    let limit = displacement_budget(n_max);
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    if x > 0.0 && x >= limit {
        return Err(Error::DisplacementBudget {
            alpha_sq: x,
            limit,
            n_max,
        });
    }
    let dim = n_max + 1;
    if x == 0.0 {
        return Ok(OperatorMatrix::identity(n_max));
    }
    let phi = alpha.arg();
    let ln_x = x.ln();
    let mut m = Array2::zeros((dim, dim));
    let mut ln_fact = 0.0;
    let mut column = vec![0.0; dim];
    for k in 0..dim {
        if k > 0 {
            ln_fact += (k as f64).ln();
        }
        laguerre_column(k, x, ln_x, ln_fact, &mut column[..dim - k]);
        let phase = Complex64::from_polar(1.0, k as f64 * phi);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for (n, &f) in column[..dim - k].iter().enumerate() {
            m[(n + k, n)] = phase * f;
            if k > 0 {
                m[(n, n + k)] = phase.conj() * (sign * f);
            }
        }
    }
    OperatorMatrix::new(m)
}

/// Fills `out[n] = f_n^(k)(x)` for `n = 0..out.len()`.
fn laguerre_column(k: usize, x: f64, ln_x: f64, ln_k_fact: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let kf = k as f64;
    let f0 = if k == 0 {
        (-0.5 * x).exp()
    } else {
        (0.5 * kf * ln_x - 0.5 * x - 0.5 * ln_k_fact).exp()
    };
    out[0] = f0;
    if out.len() == 1 {
        return;
    }
    out[1] = f0 * (1.0 + kf - x) / (kf + 1.0).sqrt();
    for n in 1..out.len() - 1 {
        let nf = n as f64;
        out[n + 1] = ((2.0 * nf + 1.0 + kf - x) * out[n] - (nf * (nf + kf)).sqrt() * out[n - 1])
            / ((nf + 1.0) * (nf + kf + 1.0)).sqrt();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation_op, matrix_exp, FockVector};

    #[test]
    fn zero_displacement_is_identity() {
        let d = displacement_op(ComplexAmplitude::ZERO, 12).unwrap();
        assert_eq!(d, OperatorMatrix::identity(12));
    }

    #[test]
    fn vacuum_element_is_gaussian() {
        for &(x, p) in &[(0.3, 0.0), (1.1, -2.0), (-2.5, 1.5)] {
            let a = ComplexAmplitude::new(x, p);
            let d = displacement_op(a, 60).unwrap();
            let expect = (-a.norm_sqr() / 2.0).exp();
            assert!((d.get(0, 0) - Complex64::new(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn coherent_column() {
        // D(alpha)|0> is the coherent state: c_n = e^{-|a|^2/2} a^n / sqrt(n!)
        let alpha = Complex64::new(0.9, -1.2);
        let d = displacement_op(alpha.into(), 50).unwrap();
        let mut expect = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..=50usize {
            if n > 0 {
                expect *= alpha / (n as f64).sqrt();
            }
            assert!((d.get(n, 0) - expect).norm() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn inverse_and_unitarity() {
        let alpha = ComplexAmplitude::new(1.7, 2.1);
        let n_max = 120;
        let d = displacement_op(alpha, n_max).unwrap();
        let dm = displacement_op(alpha.scale(-1.0), n_max).unwrap();
        let prod = d.matmul(&dm).unwrap();
        let block = n_max + 1 - 2 * crate::tol::LEAK_MARGIN - 30;
        let err = prod
            .max_abs_diff(&OperatorMatrix::identity(n_max), block)
            .unwrap();
        assert!(err < crate::tol::UNITARY, "{err}");
        assert!(d.unitarity_defect(displacement_safe_block(alpha, n_max)) < crate::tol::UNITARY);
        let small = ComplexAmplitude::new(0.7, 0.2);
        let d = displacement_op(small, 100).unwrap();
        assert!(d.unitarity_defect(displacement_safe_block(small, 100)) < 1e-13);
    }

    #[test]
    fn adjoint_is_negated_displacement() {
        let alpha = ComplexAmplitude::new(-0.4, 1.3);
        let d = displacement_op(alpha, 40).unwrap();
        let dm = displacement_op(alpha.scale(-1.0), 40).unwrap();
        assert!(d.adjoint().max_abs_diff(&dm, 41).unwrap() < 1e-15);
    }

    #[test]
    fn agrees_with_matrix_exponential() {
        let n_max = 100;
        let alpha = Complex64::new(0.7, 0.2);
        let a = annihilation_op(n_max).unwrap();
        let gen = a.adjoint().scaled(alpha).add(&a.scaled(-alpha.conj())).unwrap();
        let by_exp = matrix_exp(&gen).unwrap();
        let by_laguerre = displacement_op(alpha.into(), n_max).unwrap();
        let block = crate::fock::safe_block(n_max);
        let err = by_laguerre.max_abs_diff(&by_exp, block).unwrap();
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn budget_is_enforced() {
        let err = displacement_op(ComplexAmplitude::new(5.0, 0.0), 50).unwrap_err();
        assert!(matches!(err, Error::DisplacementBudget { n_max: 50, .. }));
        assert!(displacement_op(ComplexAmplitude::new(4.9, 0.0), 50).is_ok());
    }

    #[test]
    fn applies_to_vector() {
        let d = displacement_op(ComplexAmplitude::new(0.5, 0.5), 40).unwrap();
        let v = d.apply(&FockVector::vacuum(40)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }
}
