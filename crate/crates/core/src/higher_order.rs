//! Higher-order squeezed states `U_p(r, theta)|0>` with
//! `U_p(r, theta) = exp[r (a^p e^{-i theta} - a^dagger^p e^{i theta})]`,
//! their multiplets, and overlap scans against ordinary multiplets.
//!
//! The generator only couples `|kp>` to `|(k +- 1) p>`, so the exponential is
//! taken on that sublattice and embedded back; this is exact, not an
//! approximation.
//!
//! For `p >= 3` the truncated states do not converge as `n_max` grows except
//! at very small `r_p`: the operator `a^p + a^dagger^p` is not essentially
//! self-adjoint, and each truncation picks a different unitary extension.
//! [`Truncation::Adaptive`] detects this and fails loudly;
//! [`Truncation::Fixed`] computes at a stated truncation regardless.

use crate::error::{Error, Result};
use crate::fock::{expm::expm_array, rotate, FockVector};
use crate::multiplet::{fix_lowest_phase, multiplet_nmax, multiplet_state, MultipletSpec};
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

pub const ADAPTIVE_START: usize = 200;
pub const ADAPTIVE_CAP: usize = 1600;
/// Norm distance under doubling at which the adaptive truncation stops.
pub const CONVERGED: f64 = 1e-10;
/// Norm distance under doubling beyond which the state is rejected.
pub const UNSTABLE: f64 = 1e-8;

/// Superposition norm below which a higher multiplet member counts as empty.
const DEGENERATE_NORM: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Truncation {
    /// Double from [`ADAPTIVE_START`] until the state moves by less than
    /// [`CONVERGED`]; fail past [`ADAPTIVE_CAP`] if it still moves by
    /// [`UNSTABLE`] or more.
    Adaptive,
    Fixed(usize),
}

/// `U_p(r, theta)|0>` at a fixed truncation.
pub fn higher_squeezed_state_at(order: u32, r: f64, theta: f64, n_max: usize) -> Result<FockVector> {
    if order < 2 {
        return Err(Error::InvalidSpec(format!("squeeze order p = {order} must be at least 2")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("strength r_p = {r} must be >= 0")));
    }
    let p = order as usize;
    let levels = n_max / p + 1;
    if levels < 2 {
        return Err(Error::DegenerateSpace(n_max));
    }
    let down = Complex64::from_polar(r, -theta);
    let mut gen = Array2::<Complex64>::zeros((levels, levels));
    for k in 1..levels {
        // <(k-1)p| a^p |kp> = sqrt(kp (kp-1) ... (kp-p+1))
        let w: f64 = (0..p).map(|j| ((k * p - j) as f64).sqrt()).product();
        gen[(k - 1, k)] = down * w;
        gen[(k, k - 1)] = -down.conj() * w;
    }
    let u = expm_array(&gen)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for k in 0..levels {
        coeffs[k * p] = u[(k, 0)];
    }
    let v = FockVector::new(coeffs)?;
    if !v.is_normalized() {
        return Err(Error::InvalidArgument(format!(
            "higher-order state lost normalization: |psi|^2 = {}",
            v.norm_sqr()
        )));
    }
    Ok(v)
}

/// `U_p(r, theta)|0>` under the given truncation policy.
pub fn higher_squeezed_state(order: u32, r: f64, theta: f64, trunc: Truncation) -> Result<FockVector> {
    match trunc {
        Truncation::Fixed(n_max) => higher_squeezed_state_at(order, r, theta, n_max),
        Truncation::Adaptive => {
            let mut n_max = ADAPTIVE_START;
            let mut current = higher_squeezed_state_at(order, r, theta, n_max)?;
            loop {
                let doubled = higher_squeezed_state_at(order, r, theta, 2 * n_max)?;
                let delta = current.distance(&doubled);
                n_max *= 2;
                if delta < CONVERGED {
                    return Ok(doubled);
                }
                if n_max >= ADAPTIVE_CAP {
                    if delta < UNSTABLE {
                        return Ok(doubled);
                    }
                    return Err(Error::TruncationUnstable {
                        order,
                        strength: r,
                        delta,
                        n_max,
                    });
                }
                current = doubled;
            }
        }
    }
}

/// Normalized member `sum_j e^{-2 pi i m j / D} U_p(r, theta_j)|0>` with
/// `theta_j = 2 pi j / D`; the lowest allowed level is made real positive.
pub fn higher_multiplet_state(spec: &MultipletSpec, trunc: Truncation) -> Result<FockVector> {
    let base = higher_squeezed_state(spec.order(), spec.strength(), 0.0, trunc)?;
    higher_multiplet_from_base(spec, &base)
}

/// Builds the member from `U_p(r, 0)|0>`, using
/// `U_p(r, theta)|0> = U(-theta/p) U_p(r, 0)|0>`.
pub fn higher_multiplet_from_base(spec: &MultipletSpec, base: &FockVector) -> Result<FockVector> {
    let p = spec.order() as f64;
    let mut acc = FockVector::zeros(base.n_max());
    for j in 0..spec.size() {
        let theta = spec.angle(j);
        let weight = Complex64::from_polar(1.0, -(spec.member() as f64) * theta);
        acc = acc.add_scaled(weight, &rotate(base, -theta / p))?;
    }
    let norm = acc.norm();
    if norm < DEGENERATE_NORM {
        return Err(Error::DegenerateHigherMultiplet {
            order: spec.order(),
            size: spec.size(),
            member: spec.member(),
            strength: spec.strength(),
            norm,
        });
    }
    Ok(fix_lowest_phase(acc.normalized()?, spec.support()))
}

/// Any member: closed-form construction for `p = 2`, numerical otherwise.
pub fn member_state(spec: &MultipletSpec, trunc: Truncation) -> Result<FockVector> {
    if spec.order() == 2 {
        let n_max = match trunc {
            Truncation::Fixed(n) => n,
            Truncation::Adaptive => multiplet_nmax(spec)?,
        };
        multiplet_state(spec, n_max)
    } else {
        higher_multiplet_state(spec, trunc)
    }
}

/// `|<a|b>|` over the common levels (missing levels count as zero).
pub fn overlap_magnitude(a: &FockVector, b: &FockVector) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm()
}

/// One point of the maximum-overlap curve.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct MaxOverlap {
    pub r_p: f64,
    pub r_star: f64,
    pub overlap: f64,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct OverlapScanResult {
    pub ordinary: MultipletSpec,
    pub higher: MultipletSpec,
    pub r_axis: Vec<f64>,
    pub rp_axis: Vec<f64>,
    /// `values[i][j] = |<s(r_i)|s^(p)(r_p,j)>|`.
    pub values: Vec<Vec<f64>>,
    pub max_curve: Vec<MaxOverlap>,
    /// Truncation of the higher-order states (largest one for adaptive runs).
    pub n_max: usize,
    /// Axis points dropped because the member is empty there (`m != 0` at zero strength).
    pub dropped_r: Vec<f64>,
    pub dropped_rp: Vec<f64>,
    /// Largest change of any overlap when the higher-order truncation is doubled.
    pub doubling_delta: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub truncation: Truncation,
    /// Recompute every higher-order state at twice the truncation and report
    /// the largest overlap change.
    pub check_doubling: bool,
    /// Refine each argmax by golden-section search in `r`.
    pub refine: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            truncation: Truncation::Fixed(ADAPTIVE_START),
            check_doubling: false,
            refine: true,
        }
    }
}

fn same_support(a: &MultipletSpec, b: &MultipletSpec) -> bool {
    let key = |s: &MultipletSpec| (s.order() as usize * s.member(), s.order() as usize * s.size());
    key(a) == key(b)
}

fn degenerate_at(spec: &MultipletSpec, strength: f64) -> bool {
    strength == 0.0 && spec.member() != 0
}

/// Overlap magnitudes between an ordinary member (`r` axis) and a higher-order
/// member (`r_p` axis). Both templates supply `(D, m)`; their strengths are ignored.
pub fn overlap_scan(
    ordinary: &MultipletSpec,
    higher: &MultipletSpec,
    r_grid: &[f64],
    rp_grid: &[f64],
    opts: ScanOptions,
) -> Result<OverlapScanResult> {
    if ordinary.order() != 2 {
        return Err(Error::InvalidSpec(format!(
            "the ordinary side of a scan must have p = 2, got {}",
            ordinary.order()
        )));
    }
    if !same_support(ordinary, higher) {
        return Err(Error::SupportMismatch {
            ordinary: ordinary.support().to_string(),
            higher: higher.support().to_string(),
        });
    }
    if r_grid.is_empty() || rp_grid.is_empty() {
        return Err(Error::EmptyGrid("overlap scan axis"));
    }
    let (r_axis, dropped_r): (Vec<f64>, Vec<f64>) = r_grid.iter().partition(|&&r| !degenerate_at(ordinary, r));
    let (rp_axis, dropped_rp): (Vec<f64>, Vec<f64>) = rp_grid.iter().partition(|&&r| !degenerate_at(higher, r));
    if r_axis.is_empty() || rp_axis.is_empty() {
        return Err(Error::EmptyGrid("overlap scan axis after dropping empty members"));
    }

    // single-writer fill, then shared reads
    let build_higher = |trunc: Truncation| -> Result<Vec<FockVector>> {
        rp_axis
            .par_iter()
            .map(|&rp| higher_multiplet_state(&higher.with_strength(rp)?, trunc))
            .collect()
    };
    let higher_states = build_higher(opts.truncation)?;
    let ordinary_at = |r: f64| -> Result<FockVector> {
        let spec = ordinary.with_strength(r)?;
        multiplet_state(&spec, multiplet_nmax(&spec)?)
    };
    let ordinary_states: Vec<FockVector> = r_axis.par_iter().map(|&r| ordinary_at(r)).collect::<Result<_>>()?;

    let table = |hs: &[FockVector]| -> Vec<Vec<f64>> {
        ordinary_states
            .par_iter()
            .map(|o| hs.iter().map(|h| overlap_magnitude(o, h)).collect())
            .collect()
    };
    let values = table(&higher_states);

    let doubling_delta = if opts.check_doubling {
        let doubled_trunc = match opts.truncation {
            Truncation::Fixed(n) => Truncation::Fixed(2 * n),
            Truncation::Adaptive => Truncation::Fixed(2 * max_nmax(&higher_states)),
        };
        let doubled = table(&build_higher(doubled_trunc)?);
        Some(
            values
                .iter()
                .flatten()
                .zip(doubled.iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    } else {
        None
    };

    let objective = |r: f64, j: usize| -> Result<f64> { Ok(overlap_magnitude(&ordinary_at(r)?, &higher_states[j])) };
    let max_curve = if opts.refine {
        max_overlap_curve(&r_axis, &rp_axis, &values, objective)?
    } else {
        max_overlap_curve(&r_axis, &rp_axis, &values, |_, _| Ok(f64::NEG_INFINITY))?
    };

    Ok(OverlapScanResult {
        ordinary: *ordinary,
        higher: *higher,
        n_max: max_nmax(&higher_states),
        r_axis,
        rp_axis,
        values,
        max_curve,
        dropped_r,
        dropped_rp,
        doubling_delta,
    })
}

fn max_nmax(states: &[FockVector]) -> usize {
    states.iter().map(FockVector::n_max).max().unwrap_or(0)
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Per column `j`, the grid argmax over `r`, then a golden-section search of
/// `objective(r, j)` on the neighbouring grid interval. The refined point is
/// kept only if it beats the grid value, so `overlap` is never below the
/// column maximum.
pub fn max_overlap_curve<F>(r_axis: &[f64], rp_axis: &[f64], values: &[Vec<f64>], objective: F) -> Result<Vec<MaxOverlap>>
where
    F: Fn(f64, usize) -> Result<f64>,
{
    if r_axis.is_empty() || rp_axis.is_empty() {
        return Err(Error::EmptyGrid("maximum-overlap curve"));
    }
    (0..rp_axis.len())
        .map(|j| {
            let (i_best, best) = values
                .iter()
                .map(|row| row[j])
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
            let mut point = MaxOverlap {
                r_p: rp_axis[j],
                r_star: r_axis[i_best],
                overlap: best,
            };
            if r_axis.len() > 1 {
                let lo = r_axis[i_best.saturating_sub(1)];
                let hi = r_axis[(i_best + 1).min(r_axis.len() - 1)];
                let (r, v) = golden_max(|r| objective(r, j), lo, hi)?;
                if v > point.overlap {
                    point.r_star = r;
                    point.overlap = v;
                }
            }
            Ok(point)
        })
        .collect()
}

fn golden_max<F>(f: F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > 1e-9 * (1.0 + hi.abs()) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
}

/// `|| U(2 pi / p) psi - psi ||`, zero for any state on the `p`-sublattice.
pub fn rotation_residual(state: &FockVector, order: u32) -> f64 {
    rotate(state, TAU / order as f64).distance(state)
}
