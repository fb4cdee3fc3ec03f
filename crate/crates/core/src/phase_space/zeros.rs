//! Zeros of the characteristic function along rays from the origin.

use super::CharFunction;
use crate::error::{Error, Result};
use crate::fock::ComplexAmplitude;
use crate::multiplet::MultipletSpec;
use std::f64::consts::PI;

/// Default radial sampling step used to bracket sign changes.
pub const RADIAL_STEP: f64 = 0.005;

const BISECTION_TOL: f64 = 1e-10;

/// Sign-change brackets `[t0, t1]` of `f` on `[0, t_max]` sampled every `step`.
pub fn sign_changes_along<F>(f: F, t_max: f64, step: f64) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(step > 0.0) || !(t_max > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "radial scan needs positive extent and step, got {t_max} and {step}"
        )));
    }
    let n = (t_max / step).ceil() as usize;
    let mut brackets = Vec::new();
    let mut prev_t = 0.0;
    let mut prev = f(0.0)?;
    for i in 1..=n {
        let t = (i as f64 * step).min(t_max);
        let val = f(t)?;
        if prev == 0.0 {
            brackets.push((prev_t, prev_t));
        } else if prev.signum() != val.signum() && val != 0.0 {
            brackets.push((prev_t, t));
        }
        prev_t = t;
        prev = val;
    }
    if prev == 0.0 {
        brackets.push((prev_t, prev_t));
    }
    Ok(brackets)
}

fn bisect<F>(f: &F, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest radius in `(0, r_max]` where `C` changes sign along the ray at
/// `angle`, refined by bisection; `None` if there is none.
pub fn first_zero_along(cf: &CharFunction, angle: f64, r_max: f64, step: f64) -> Result<Option<f64>> {
    let along = |t: f64| cf.evaluate(ComplexAmplitude::from_polar(t, angle));
    let brackets = sign_changes_along(along, r_max, step)?;
    match brackets.first() {
        Some(&(lo, hi)) if lo == hi => Ok(Some(lo)),
        Some(&(lo, hi)) => Ok(Some(bisect(&along, lo, hi)?)),
        None => Ok(None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct RayZero {
    pub angle: f64,
    pub radius: Option<f64>,
}

/// Largest ratio between first-zero radii on neighbouring rays that still
/// counts as one continuous ring.
pub const RING_JUMP: f64 = 1.5;

/// First zeros on rays covering one symmetry slice `[0, pi/D)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ZeroRingScan {
    pub rays: Vec<RayZero>,
    /// Largest `max(r_k, r_{k+1}) / min(r_k, r_{k+1})` over neighbouring rays,
    /// including the wrap from the last ray to the mirror image of the first.
    pub max_jump: f64,
    /// Every ray has a zero and no neighbouring pair jumps by [`RING_JUMP`] or
    /// more. By the rotation and reflection symmetries the first zeros then
    /// form one ring around the origin.
    pub closed_ring: bool,
    pub r_max_radius: f64,
}

impl ZeroRingScan {
    pub fn radius_at(&self, k: usize) -> Option<f64> {
        self.rays.get(k).and_then(|r| r.radius)
    }
}

pub fn zero_ring_scan(spec: &MultipletSpec, n_rays: usize, r_max_radius: f64) -> Result<ZeroRingScan> {
    zero_ring_scan_with(&CharFunction::new(spec)?, n_rays, r_max_radius, RADIAL_STEP)
}

pub fn zero_ring_scan_with(
    cf: &CharFunction,
    n_rays: usize,
    r_max_radius: f64,
    step: f64,
) -> Result<ZeroRingScan> {
    if n_rays < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 rays, got {n_rays}")));
    }
    let d = cf.spec().size() as f64;
    let rays = (0..n_rays)
        .map(|k| {
            let angle = k as f64 * PI / (d * n_rays as f64);
            let radius = first_zero_along(cf, angle, r_max_radius, step)?;
            Ok(RayZero { angle, radius })
        })
        .collect::<Result<Vec<_>>>()?;
    let radii: Option<Vec<f64>> = rays.iter().map(|r| r.radius).collect();
    let max_jump = match &radii {
        Some(radii) => {
            // the ray at pi/D is the ray at 0 rotated, so the slice wraps around
            let wrap = [radii[radii.len() - 1], radii[0]];
            radii
                .windows(2)
                .chain(std::iter::once(&wrap[..]))
                .map(|w| w[0].max(w[1]) / w[0].min(w[1]))
                .fold(1.0, f64::max)
        }
        None => f64::INFINITY,
    };
    let closed_ring = max_jump < RING_JUMP;
    Ok(ZeroRingScan {
        rays,
        max_jump,
        closed_ring,
        r_max_radius,
    })
}
