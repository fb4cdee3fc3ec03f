//! Rectangular phase-space samples and inclusive `start:stop:count` ranges.

use crate::error::{Error, Result};
use crate::fock::ComplexAmplitude;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// `count` evenly spaced values from `start` to `stop`, both included.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::EmptyGrid("range with zero points"));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidArgument(format!("range {start}:{stop} is not finite")));
        }
        Ok(AxisRange { start, stop, count })
    }

    /// Symmetric range `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, count: usize) -> Result<Self> {
        AxisRange::new(-half_width, half_width, count)
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

impl FromStr for AxisRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(Error::InvalidArgument(format!(
                "range `{s}` must look like start:stop:count"
            )));
        };
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("`{t}` in range `{s}` is not a number")))
        };
        let count = count
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("point count `{count}` in range `{s}` is not an integer")))?;
        AxisRange::new(num(start)?, num(stop)?, count)
    }
}

impl fmt::Display for AxisRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

/// Real function sampled on `x_axis x p_axis`; `values[ip * nx + ix]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2D {
    pub label: String,
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: Vec<f64>,
}

impl Grid2D {
    /// Evaluates `f` at every grid point, rows in parallel.
    pub fn evaluate<F>(label: &str, x_axis: Vec<f64>, p_axis: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(ComplexAmplitude) -> Result<f64> + Sync,
    {
        if x_axis.is_empty() || p_axis.is_empty() {
            return Err(Error::EmptyGrid("phase-space grid with an empty axis"));
        }
        let rows: Vec<Vec<f64>> = p_axis
            .par_iter()
            .map(|&p| x_axis.iter().map(|&x| f(ComplexAmplitude::new(x, p))).collect())
            .collect::<Result<_>>()?;
        Ok(Grid2D {
            label: label.to_string(),
            x_axis,
            p_axis,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn square(label: &str, half_width: f64, res: usize, f: impl Fn(ComplexAmplitude) -> Result<f64> + Sync) -> Result<Self> {
        let axis = AxisRange::symmetric(half_width, res)?.values();
        Grid2D::evaluate(label, axis.clone(), axis, f)
    }

    pub fn get(&self, ix: usize, ip: usize) -> f64 {
        self.values[ip * self.x_axis.len() + ix]
    }

    /// `(x, p, value)` in row-major order (`x` fastest).
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let nx = self.x_axis.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.x_axis[i % nx], self.p_axis[i / nx], v))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Two-dimensional trapezoidal integral over the sampled rectangle.
    pub fn trapezoid(&self) -> f64 {
        let weights = |axis: &[f64]| -> Vec<f64> {
            let n = axis.len();
            (0..n)
                .map(|i| {
                    let left = if i > 0 { axis[i] - axis[i - 1] } else { 0.0 };
                    let right = if i + 1 < n { axis[i + 1] - axis[i] } else { 0.0 };
                    0.5 * (left + right)
                })
                .collect()
        };
        let wx = weights(&self.x_axis);
        let wp = weights(&self.p_axis);
        let nx = wx.len();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v * wx[i % nx] * wp[i / nx])
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inclusive_ranges() {
        let r: AxisRange = "0:2.5:6".parse().unwrap();
        assert_eq!(r.values(), vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5]);
        let single: AxisRange = "-1:1:1".parse().unwrap();
        assert_eq!(single.values(), vec![-1.0]);
        assert!(matches!("0:1:0".parse::<AxisRange>(), Err(Error::EmptyGrid(_))));
        assert!("0:1".parse::<AxisRange>().is_err());
        assert!("a:1:3".parse::<AxisRange>().is_err());
        assert_eq!(r.to_string().parse::<AxisRange>().unwrap(), r);
    }

    #[test]
    fn grid_layout_and_quadrature() {
        let g = Grid2D::evaluate("xp", vec![0.0, 1.0, 2.0], vec![-1.0, 1.0], |a| Ok(a.x * 10.0 + a.p)).unwrap();
        assert_eq!(g.get(2, 0), 19.0);
        assert_eq!(g.get(1, 1), 11.0);
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts[4], (1.0, 1.0, 11.0));
        assert_eq!(g.min(), -1.0);
        assert_eq!(g.max(), 21.0);

        let unit = Grid2D::square("one", 1.0, 11, |_| Ok(1.0)).unwrap();
        assert!((unit.trapezoid() - 4.0).abs() < 1e-12);
        let gauss = Grid2D::square("g", 8.0, 401, |a| Ok((-a.norm_sqr()).exp())).unwrap();
        assert!((gauss.trapezoid() - std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn propagates_errors() {
        let out = Grid2D::square("e", 1.0, 3, |a| {
            if a.x > 0.5 {
                Err(Error::NonFinite)
            } else {
                Ok(0.0)
            }
        });
        assert_eq!(out, Err(Error::NonFinite));
        assert!(Grid2D::evaluate("e", vec![], vec![1.0], |_| Ok(0.0)).is_err());
    }
}
