//! The doublet (`D = 2`) in closed form.

use crate::error::{Error, Result};
use crate::fock::ComplexAmplitude;
use std::f64::consts::FRAC_PI_2;

/// `C_{2,m}(x, p)` written out for `theta in {0, pi}`:
///
/// `N^2 [ e^{-(x^2 e^{2r} + p^2 e^{-2r})/2} + e^{-(x^2 e^{-2r} + p^2 e^{2r})/2}
///       + 2 (-1)^m e^{-(x^2+p^2)/(2 cosh 2r)} cos(x p tanh 2r) / sqrt(cosh 2r) ]`
///
/// with `1/N^2 = 2 (1 + (-1)^m / sqrt(cosh 2r))`.
pub fn d2_closed_form(member: usize, r: f64, alpha: ComplexAmplitude) -> Result<f64> {
    if member > 1 {
        return Err(Error::InvalidSpec(format!("member m = {member} of a doublet must be 0 or 1")));
    }
    if r == 0.0 && member == 1 {
        return Err(Error::DegenerateMultiplet { size: 2, member });
    }
    let sign = if member == 0 { 1.0 } else { -1.0 };
    let (x, p) = (alpha.x, alpha.p);
    let (e2, em2) = ((2.0 * r).exp(), (-2.0 * r).exp());
    let ch2 = (2.0 * r).cosh();
    let norm_sq = 1.0 / (2.0 * (1.0 + sign / ch2.sqrt()));
    let direct = (-0.5 * (x * x * e2 + p * p * em2)).exp() + (-0.5 * (x * x * em2 + p * p * e2)).exp();
    let interference = 2.0 * sign * (-(x * x + p * p) / (2.0 * ch2)).exp() * (x * p * (2.0 * r).tanh()).cos()
        / ch2.sqrt();
    Ok(norm_sq * (direct + interference))
}

/// Hyperbola constant `c_n = (pi/2)(2n+1) / tanh 2r`: the interference cosine
/// of the doublet vanishes on `x p = c_n`.
pub fn d2_zero_lines(r: f64, n: u32) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NoInterference);
    }
    Ok(FRAC_PI_2 * (2 * n + 1) as f64 / (2.0 * r).tanh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplet::MultipletSpec;
    use crate::phase_space::char_func;

    #[test]
    fn matches_general_formula() {
        for m in 0..2 {
            for &r in &[0.3, 1.0, 1.7] {
                let spec = MultipletSpec::ordinary(2, m, r).unwrap();
                for &(x, p) in &[(0.0, 0.0), (0.5, -1.2), (2.2, 1.9), (-3.0, 0.4)] {
                    let a = ComplexAmplitude::new(x, p);
                    let closed = d2_closed_form(m, r, a).unwrap();
                    let general = char_func(&spec, a).unwrap();
                    assert!((closed - general).abs() < 1e-12, "m={m} r={r} ({x},{p})");
                }
            }
        }
    }

    #[test]
    fn zero_line_constants() {
        let c0 = d2_zero_lines(1.0, 0).unwrap();
        assert!((c0 - FRAC_PI_2 / 2f64.tanh()).abs() < 1e-15);
        assert!((d2_zero_lines(20.0, 0).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(d2_zero_lines(0.0, 0), Err(Error::NoInterference));
    }
}
