//! Squeezed quantum multiplets on a truncated Fock space.
//!
//! The crate builds ordinary (`p = 2`) and higher-order (`p >= 3`) squeezed
//! multiplets, evaluates the closed-form characteristic and Wigner functions of
//! ordinary multiplets, and carries an independent brute-force oracle that
//! computes the same quantities from dense Fock-space matrices.
//!
//! Module map:
//!
//! * [`fock`]: states, ladder/rotation/displacement operators, matrix exponential.
//! * [`multiplet`]: ordinary squeezed states and multiplets.
//! * [`higher_order`]: `p`-th order squeezed states, their multiplets and overlap scans.
//! * [`phase_space`]: analytic characteristic/Wigner functions, zero loci, asymptotics.
//! * [`oracle`]: brute-force characteristic/Wigner functions.
//! * [`grid`]: rectangular phase-space samples and inclusive range parsing.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock;
pub mod grid;
pub mod higher_order;
pub mod multiplet;
pub mod oracle;
pub mod phase_space;

mod dd;

pub use error::{Error, Result};
pub use fock::{ComplexAmplitude, FockVector, OperatorMatrix};
pub use multiplet::{MultipletSpec, SupportPattern};

pub use num_complex::Complex64;

/// Numerical tolerances shared across modules.
pub mod tol {
    /// `| sum |c_n|^2 - 1 |` bound for vectors treated as normalized.
    pub const NORM: f64 = 1e-10;
    /// `max |M^dagger M - I|` bound on the safe sub-block of unitary matrices.
    pub const UNITARY: f64 = 1e-8;
    /// Maximum probability allowed in the top `LEAK_MARGIN` levels and beyond.
    pub const LEAK: f64 = 1e-12;
    /// Number of top Fock levels treated as corrupted by truncation.
    pub const LEAK_MARGIN: usize = 20;
}
