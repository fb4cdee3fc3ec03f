//! Strong-squeezing behaviour of the interference exponent.
//!
//! For the pair `(theta_a, 0)` the non-Gaussian part of the exponent is
//! `-conj(v/u) beta^2 / 2`. Written in `x, p` it reads
//!
//! `s S / (1 + s^2 S^2) (i c + s C) (x^2 e^{2r} - p^2 e^{-2r} + 2 i x p) / 2`
//!
//! with `s, c = sin, cos (theta_a / 2)` and `S, C = sinh, cosh 2r`. As `r` grows
//! it tends to `x^2 e^{2r} / 2 + i (x / s)(c x + s p)`, whose imaginary part
//! vanishes on the asymptotes `x = 0` and `x = -tan(theta_a / 2) p`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

fn check_angle(theta_a: f64) -> Result<(f64, f64)> {
    if !(theta_a > 0.0 && theta_a < TAU) {
        return Err(Error::AngleOutOfRange(theta_a));
    }
    Ok((0.5 * theta_a).sin_cos())
}

/// Exact interference exponent at finite `r`.
pub fn exact_phase(theta_a: f64, r: f64, x: f64, p: f64) -> Result<Complex64> {
    let (s, c) = check_angle(theta_a)?;
    let (big_s, big_c) = ((2.0 * r).sinh(), (2.0 * r).cosh());
    let pref = s * big_s / (1.0 + s * s * big_s * big_s);
    let quad = Complex64::new(x * x * (2.0 * r).exp() - p * p * (-2.0 * r).exp(), 2.0 * x * p);
    Ok(Complex64::new(s * big_c, c) * quad * (0.5 * pref))
}

/// Limit of [`exact_phase`] for large `r`.
pub fn asymptotic_phase(theta_a: f64, r: f64, x: f64, p: f64) -> Result<Complex64> {
    let (s, c) = check_angle(theta_a)?;
    Ok(Complex64::new(0.5 * x * x * (2.0 * r).exp(), x / s * (c * x + s * p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ComplexAmplitude;
    use crate::phase_space::{alpha_squeezed, pair_coeffs};

    #[test]
    fn exact_phase_is_pair_exponent() {
        for &(th, r, x, p) in &[(TAU / 3.0, 0.8, 0.5, 1.0), (1.0, 1.4, -0.3, 0.9), (4.5, 0.2, 1.1, -0.6)] {
            let pc = pair_coeffs(r, th).unwrap();
            let beta: Complex64 = alpha_squeezed(ComplexAmplitude::new(x, p), r, 0.0).into();
            let from_pair = -0.5 * pc.squeeze_ratio() * beta * beta;
            let exact = exact_phase(th, r, x, p).unwrap();
            assert!((exact - from_pair).norm() < 1e-12 * (1.0 + exact.norm()));
        }
    }

    #[test]
    fn asymptotes_have_zero_phase() {
        let th = TAU / 3.0;
        assert_eq!(asymptotic_phase(th, 2.0, 0.0, 1.7).unwrap().im, 0.0);
        let p = 0.8;
        let x = -(0.5 * th).tan() * p;
        assert!(asymptotic_phase(th, 2.0, x, p).unwrap().im.abs() < 1e-15);
    }

    #[test]
    fn converges_with_squeezing() {
        let th = TAU / 3.0;
        let (x, p) = (0.5, 1.0);
        let errs: Vec<f64> = [2.0, 3.0, 4.0]
            .iter()
            .map(|&r| {
                let e = exact_phase(th, r, x, p).unwrap().im;
                let l = asymptotic_phase(th, r, x, p).unwrap().im;
                ((e - l) / l).abs()
            })
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        assert!(errs[2] < 1e-5);
    }

    #[test]
    fn rejects_coincident_axes() {
        assert_eq!(exact_phase(0.0, 1.0, 0.1, 0.1), Err(Error::AngleOutOfRange(0.0)));
        assert!(asymptotic_phase(TAU, 1.0, 0.1, 0.1).is_err());
    }
}
