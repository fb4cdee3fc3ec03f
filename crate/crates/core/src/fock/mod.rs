//! Truncated Fock space: state vectors, dense operators and the standard
//! ladder, rotation and displacement operators.

mod displacement;
pub(crate) mod expm;

pub use displacement::{displacement_budget, displacement_op, displacement_safe_block};
pub use expm::matrix_exp;

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;
use std::fmt;

/// Phase-space coordinate `alpha = x + i p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComplexAmplitude {
    pub x: f64,
    pub p: f64,
}

impl ComplexAmplitude {
    pub const ZERO: ComplexAmplitude = ComplexAmplitude { x: 0.0, p: 0.0 };

    pub const fn new(x: f64, p: f64) -> Self {
        ComplexAmplitude { x, p }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        ComplexAmplitude::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.p * self.p
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.p)
    }

    pub fn arg(self) -> f64 {
        self.p.atan2(self.x)
    }

    pub fn conj(self) -> Self {
        ComplexAmplitude::new(self.x, -self.p)
    }

    pub fn scale(self, k: f64) -> Self {
        ComplexAmplitude::new(self.x * k, self.p * k)
    }

    /// `alpha * exp(i angle)`.
    pub fn rotate(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        ComplexAmplitude::new(self.x * c - self.p * s, self.x * s + self.p * c)
    }
}

impl From<ComplexAmplitude> for Complex64 {
    fn from(a: ComplexAmplitude) -> Self {
        Complex64::new(a.x, a.p)
    }
}

impl From<Complex64> for ComplexAmplitude {
    fn from(z: Complex64) -> Self {
        ComplexAmplitude::new(z.re, z.im)
    }
}

impl fmt::Display for ComplexAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.x, self.p)
    }
}

/// State vector over `|0>, ..., |n_max>`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    coeffs: Vec<Complex64>,
}

impl FockVector {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a Fock vector needs at least one level".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(FockVector { coeffs })
    }

    pub fn zeros(n_max: usize) -> Self {
        FockVector {
            coeffs: vec![Complex64::new(0.0, 0.0); n_max + 1],
        }
    }

    /// Number state `|n>`; `n` must not exceed `n_max`.
    pub fn basis(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::InvalidArgument(format!("|{n}> lies above n_max = {n_max}")));
        }
        let mut v = FockVector::zeros(n_max);
        v.coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn vacuum(n_max: usize) -> Self {
        let mut v = FockVector::zeros(n_max);
        v.coeffs[0] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= crate::tol::NORM
    }

    /// Copy scaled to unit norm; fails on a (numerically) zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > f64::MIN_POSITIVE) {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        FockVector {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Probability carried by the top `margin` levels.
    pub fn tail_mass(&self, margin: usize) -> f64 {
        let start = self.dim().saturating_sub(margin);
        self.coeffs[start..].iter().map(|c| c.norm_sqr()).sum()
    }

    /// Fails with [`Error::TailMass`] if the top [`tol::LEAK_MARGIN`](crate::tol::LEAK_MARGIN)
    /// levels carry more than [`tol::LEAK`](crate::tol::LEAK).
    pub fn check_tail(&self) -> Result<()> {
        let tail = self.tail_mass(crate::tol::LEAK_MARGIN);
        if tail >= crate::tol::LEAK {
            return Err(Error::TailMass {
                tail,
                margin: crate::tol::LEAK_MARGIN,
                n_max: self.n_max(),
            });
        }
        Ok(())
    }

    /// Same state on a different truncation: zero-padded or cut.
    pub fn resized(&self, n_max: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n_max + 1, Complex64::new(0.0, 0.0));
        FockVector { coeffs }
    }

    /// Euclidean distance, padding the shorter vector with zeros.
    pub fn distance(&self, other: &FockVector) -> f64 {
        let len = self.dim().max(other.dim());
        (0..len)
            .map(|n| (self.get(n) - other.get(n)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: Complex64, other: &FockVector) -> Result<Self> {
        same_truncation(self.n_max(), other.n_max())?;
        Ok(FockVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + k * b)
                .collect(),
        })
    }

    /// Multiply by a phase so that the first coefficient above `threshold`
    /// in magnitude becomes real positive.
    pub fn fix_global_phase(&self, threshold: f64) -> Self {
        match self.coeffs.iter().find(|c| c.norm() > threshold) {
            Some(lead) => self.scaled(lead.conj() / lead.norm()),
            None => self.clone(),
        }
    }
}

fn same_truncation(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::TruncationMismatch { left, right });
    }
    Ok(())
}

/// `<bra|ket>`.
pub fn inner(bra: &FockVector, ket: &FockVector) -> Result<Complex64> {
    same_truncation(bra.n_max(), ket.n_max())?;
    Ok(bra
        .coeffs
        .iter()
        .zip(&ket.coeffs)
        .map(|(b, k)| b.conj() * k)
        .sum())
}

/// Dense square operator on the truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: Array2<Complex64>,
}

impl OperatorMatrix {
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols || rows == 0 {
            return Err(Error::InvalidArgument(format!(
                "operator must be square and non-empty, got {rows}x{cols}"
            )));
        }
        Ok(OperatorMatrix { entries })
    }

    pub fn identity(n_max: usize) -> Self {
        OperatorMatrix {
            entries: Array2::eye(n_max + 1),
        }
    }

    pub fn zeros(n_max: usize) -> Self {
        OperatorMatrix {
            entries: Array2::zeros((n_max + 1, n_max + 1)),
        }
    }

    pub fn from_diagonal(diag: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        let diag: Vec<Complex64> = diag.into_iter().collect();
        let mut m = Array2::zeros((diag.len(), diag.len()));
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        OperatorMatrix::new(m)
    }

    pub fn n_max(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<Complex64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            entries: self.entries.t().mapv(|c| c.conj()),
        }
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        OperatorMatrix {
            entries: &self.entries * k,
        }
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<Self> {
        same_truncation(self.n_max(), other.n_max())?;
        Ok(OperatorMatrix {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<Self> {
        same_truncation(self.n_max(), other.n_max())?;
        Ok(OperatorMatrix {
            entries: self.entries.dot(&other.entries),
        })
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        same_truncation(self.n_max(), v.n_max())?;
        let coeffs = self
            .entries
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(&v.coeffs).map(|(m, c)| m * c).sum())
            .collect();
        Ok(FockVector { coeffs })
    }

    /// Largest entrywise deviation over the leading `block x block` corner.
    pub fn max_abs_diff(&self, other: &OperatorMatrix, block: usize) -> Result<f64> {
        same_truncation(self.n_max(), other.n_max())?;
        let b = block.min(self.n_max() + 1);
        let mut worst = 0.0f64;
        for i in 0..b {
            for j in 0..b {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        Ok(worst)
    }

    /// `max |(M^dagger M - I)_{ij}|` over the leading `block` columns. Pick a
    /// block whose image stays clear of the truncation edge; [`safe_block`]
    /// is adequate for generators that move population by a few levels.
    pub fn unitarity_defect(&self, block: usize) -> f64 {
        let b = block.clamp(1, self.n_max() + 1);
        let m = self.entries.slice(ndarray::s![.., ..b]);
        let gram = m.t().mapv(|c| c.conj()).dot(&m);
        let mut worst = 0.0f64;
        for ((i, j), g) in gram.indexed_iter() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
        worst
    }
}

/// Size of the leading block considered free of truncation artifacts.
pub fn safe_block(n_max: usize) -> usize {
    (n_max + 1).saturating_sub(crate::tol::LEAK_MARGIN).max(1)
}

/// Annihilation operator `a` with `<n-1|a|n> = sqrt(n)`.
pub fn annihilation_op(n_max: usize) -> Result<OperatorMatrix> {
    if n_max == 0 {
        return Err(Error::DegenerateSpace(n_max));
    }
    let mut m = Array2::zeros((n_max + 1, n_max + 1));
    for n in 1..=n_max {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(OperatorMatrix { entries: m })
}

/// Creation operator `a^dagger`.
pub fn creation_op(n_max: usize) -> Result<OperatorMatrix> {
    Ok(annihilation_op(n_max)?.adjoint())
}

/// Number operator `N = a^dagger a`, exact on every level including `n_max`.
pub fn number_op(n_max: usize) -> OperatorMatrix {
    OperatorMatrix::from_diagonal((0..=n_max).map(|n| Complex64::new(n as f64, 0.0)))
        .expect("non-empty diagonal")
}

/// Rotation `U(phi) = exp(-i phi N)`.
pub fn rotation_op(phi: f64, n_max: usize) -> OperatorMatrix {
    OperatorMatrix::from_diagonal(rotation_phases(phi, n_max)).expect("non-empty diagonal")
}

/// Diagonal of `U(phi)`. The phase of level `n` is reduced modulo `2 pi`
/// before exponentiation so that `U(2 pi)` is exactly the identity.
pub fn rotation_phases(phi: f64, n_max: usize) -> impl Iterator<Item = Complex64> {
    (0..=n_max).map(move |n| {
        let angle = (-phi * n as f64).rem_euclid(std::f64::consts::TAU);
        Complex64::from_polar(1.0, angle)
    })
}

/// `U(phi) |v>` without materializing the matrix.
pub fn rotate(v: &FockVector, phi: f64) -> FockVector {
    FockVector {
        coeffs: v
            .coeffs
            .iter()
            .zip(rotation_phases(phi, v.n_max()))
            .map(|(c, ph)| c * ph)
            .collect(),
    }
}
