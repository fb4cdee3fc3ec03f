//! Ordinary squeezed states and squeezed multiplets.
//!
//! A multiplet member is the superposition
//! `|s_{D,m}> = N_{D,m} sum_j exp(-2 pi i m j / D) |r, 2 pi j / D>`
//! of `D` squeezed vacua whose squeezing axes are spaced by `pi / D`.
//! Only photon numbers `2(m + nD)` survive the sum.

use crate::dd::{cis_pi_fraction, Cdd, Dd};
use crate::error::{Error, Result};
use crate::fock::{rotate, FockVector};
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt;

/// Squeeze order `p`, multiplet size `D`, member `m` and strength `r`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MultipletSpec {
    order: u32,
    size: usize,
    member: usize,
    strength: f64,
}

impl MultipletSpec {
    pub fn new(order: u32, size: usize, member: usize, strength: f64) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidSpec(format!("squeeze order p = {order} must be at least 2")));
        }
        if size == 0 {
            return Err(Error::InvalidSpec("multiplet size D must be at least 1".into()));
        }
        if member >= size {
            return Err(Error::InvalidSpec(format!(
                "member index m = {member} must be below D = {size}"
            )));
        }
        if !(strength >= 0.0) || !strength.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "squeezing strength r = {strength} must be finite and non-negative"
            )));
        }
        Ok(MultipletSpec {
            order,
            size,
            member,
            strength,
        })
    }

    /// Ordinary (`p = 2`) multiplet member.
    pub fn ordinary(size: usize, member: usize, strength: f64) -> Result<Self> {
        MultipletSpec::new(2, size, member, strength)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn member(&self) -> usize {
        self.member
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn with_strength(&self, strength: f64) -> Result<Self> {
        MultipletSpec::new(self.order, self.size, self.member, strength)
    }

    pub fn support(&self) -> SupportPattern {
        SupportPattern {
            order: self.order,
            size: self.size,
            member: self.member,
        }
    }

    /// Squeezing angle of the `j`-th component, `2 pi j / D`.
    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.size as f64
    }

    fn require_ordinary(&self) -> Result<()> {
        if self.order != 2 {
            return Err(Error::InvalidSpec(format!(
                "ordinary multiplet expected, got squeeze order p = {}",
                self.order
            )));
        }
        Ok(())
    }
}

impl fmt::Display for MultipletSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={},D={},m={},r={}",
            self.order, self.size, self.member, self.strength
        )
    }
}

/// Photon numbers `p (m + n D)`, `n >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SupportPattern {
    pub order: u32,
    pub size: usize,
    pub member: usize,
}

impl SupportPattern {
    pub fn allows(&self, n: usize) -> bool {
        let p = self.order as usize;
        n.is_multiple_of(p) && (n / p) % self.size == self.member
    }

    /// Allowed levels up to `n_max`.
    pub fn levels(&self, n_max: usize) -> impl Iterator<Item = usize> {
        let step = self.order as usize * self.size;
        let first = self.order as usize * self.member;
        (first..=n_max).step_by(step)
    }

    pub fn lowest(&self) -> usize {
        self.order as usize * self.member
    }
}

impl fmt::Display for SupportPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*({} + {}n)", self.order, self.member, self.size)
    }
}

/// Smallest even truncation at which a squeezed vacuum of strength `r`
/// leaves less than a tenth of the leakage tolerance in its top levels.
pub fn squeezed_nmax(r: f64) -> usize {
    truncation_for(r, 1.0)
}

/// Like [`squeezed_nmax`] for a multiplet member. Its coefficients are
/// `N D c_n` on the allowed levels, so the squeezed tail is amplified by
/// `N^2 D^2`.
pub fn multiplet_nmax(spec: &MultipletSpec) -> Result<usize> {
    let n = multiplet_norm(spec)?;
    let d = spec.size as f64;
    Ok(truncation_for(spec.strength, n * n * d * d))
}

fn truncation_for(r: f64, amplification: f64) -> usize {
    let t2 = r.tanh().powi(2);
    let mut weight = amplification / r.cosh();
    let mut k = 0usize;
    // successive weights shrink by at least tanh^2 r, so the tail after
    // level 2k is bounded by the geometric continuation of the current weight
    while weight * t2 / (1.0 - t2).max(1e-300) > 0.1 * crate::tol::LEAK && k < 1_000_000 {
        weight *= t2 * (2 * k + 1) as f64 / (2 * k + 2) as f64;
        k += 1;
    }
    let n = 2 * k + crate::tol::LEAK_MARGIN + 2;
    (n + n % 2).max(40)
}

/// Squeezed vacuum `|r, theta> = S(r, theta)|0>` in the number basis,
/// `c_{2k} = (-tanh r)^k e^{i theta k} sqrt((2k)!) / (2^k k! sqrt(cosh r))`.
pub fn squeezed_state(r: f64, theta: f64, n_max: usize) -> Result<FockVector> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("squeezing strength r = {r} must be >= 0")));
    }
    if n_max < 2 {
        return Err(Error::DegenerateSpace(n_max));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let ratio = Complex64::from_polar(-r.tanh(), theta);
    let mut c = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    for k in 0..=n_max / 2 {
        coeffs[2 * k] = c;
        c *= ratio * ((2 * k + 1) as f64 / (2 * k + 2) as f64).sqrt();
    }
    let v = FockVector::new(coeffs)?;
    v.check_tail()?;
    Ok(v)
}

/// `1 / N_{D,m}^2` from the closed-form double sum of pairwise overlaps,
/// returned as a complex number so callers can inspect the branch residue.
pub fn inverse_norm_sq(spec: &MultipletSpec) -> Result<Complex64> {
    spec.require_ordinary()?;
    let d = spec.size as f64;
    let r = spec.strength;
    let t2 = r.tanh().powi(2);
    let ch = r.cosh();
    // The double sum only depends on j - k modulo D; each residue occurs D times.
    let sum: Complex64 = (0..spec.size)
        .map(|delta| {
            let angle = TAU * delta as f64 / d;
            let phase = Complex64::from_polar(1.0, -(spec.member as f64) * angle);
            let root = (Complex64::new(1.0, 0.0) - Complex64::from_polar(t2, angle)).sqrt();
            phase / (ch * root)
        })
        .sum();
    Ok(sum * d)
}

/// The same sum as [`inverse_norm_sq`] in double-double. For members with
/// `m > 0` at weak squeezing `1/N^2` is many orders below its O(1) terms, so
/// f64 would lose most of its digits to cancellation.
pub(crate) fn inverse_norm_sq_precise(spec: &MultipletSpec) -> Result<Dd> {
    spec.require_ordinary()?;
    if spec.strength == 0.0 && spec.member != 0 {
        return Err(Error::DegenerateMultiplet {
            size: spec.size,
            member: spec.member,
        });
    }
    let d = spec.size;
    let m = spec.member as i64;
    let e_r = Dd::new(spec.strength).exp();
    let e_mr = Dd::ONE / e_r;
    let cosh_r = (e_r + e_mr).mul_f64(0.5);
    let tanh_r = (e_r - e_mr) / (e_r + e_mr);
    let t2 = tanh_r * tanh_r;
    let mut sum = Cdd::ZERO;
    for delta in 0..d as i64 {
        let root = (Cdd::ONE - cis_pi_fraction(2 * delta, d).scale(t2)).sqrt();
        sum = sum + cis_pi_fraction(-2 * m * delta, d) / root.scale(cosh_r);
    }
    let inv = sum.scale(Dd::new(d as f64));
    if inv.im.to_f64().abs() >= 1e-10 || inv.re.hi <= 0.0 {
        return Err(Error::BranchInconsistency {
            re: inv.re.to_f64(),
            im: inv.im.to_f64(),
        });
    }
    Ok(inv.re)
}

/// Normalization constant `N_{D,m}` of an ordinary multiplet member.
pub fn multiplet_norm(spec: &MultipletSpec) -> Result<f64> {
    Ok((Dd::ONE / inverse_norm_sq_precise(spec)?).sqrt().to_f64())
}

/// Ordinary multiplet member `|s_{D,m}>`, with the coefficient of the lowest
/// allowed level `2m` made real positive.
pub fn multiplet_state(spec: &MultipletSpec, n_max: usize) -> Result<FockVector> {
    spec.require_ordinary()?;
    let norm = multiplet_norm(spec)?;
    let base = squeezed_state(spec.strength, 0.0, n_max)?;
    let mut acc = FockVector::zeros(n_max);
    for j in 0..spec.size {
        let theta = spec.angle(j);
        let weight = Complex64::from_polar(norm, -(spec.member as f64) * theta);
        // |r, theta> = U(-theta/2) |r, 0>
        acc = acc.add_scaled(weight, &rotate(&base, -theta / 2.0))?;
    }
    acc.check_tail()?;
    Ok(fix_lowest_phase(acc, spec.support()))
}

pub(crate) fn fix_lowest_phase(v: FockVector, pattern: SupportPattern) -> FockVector {
    let lead = v.get(pattern.lowest());
    if lead.norm() == 0.0 {
        return v;
    }
    v.scaled(lead.conj() / lead.norm())
}

/// `|| U(2 pi / (p D)) psi - exp(-2 pi i m / D) psi ||`.
pub fn verify_rotation_eigenstate(state: &FockVector, spec: &MultipletSpec) -> f64 {
    let p = spec.order as f64;
    let d = spec.size as f64;
    let rotated = rotate(state, TAU / (p * d));
    let eig = Complex64::from_polar(1.0, -TAU * spec.member as f64 / d);
    rotated
        .add_scaled(-eig, state)
        .map(|diff| diff.norm())
        .unwrap_or(f64::INFINITY)
}

/// `true` iff every coefficient outside `pattern` has magnitude below `tol`.
pub fn support_check(state: &FockVector, pattern: &SupportPattern, tol: f64) -> bool {
    state
        .coeffs()
        .iter()
        .enumerate()
        .all(|(n, c)| pattern.allows(n) || c.norm() < tol)
}

/// Largest coefficient magnitude outside `pattern`.
pub fn support_violation(state: &FockVector, pattern: &SupportPattern) -> f64 {
    state
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(n, _)| !pattern.allows(*n))
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}
