use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate space: truncation n_max = {0} leaves no ladder structure")]
    DegenerateSpace(usize),

    #[error(
        "displacement exceeds truncation budget: |alpha|^2 = {alpha_sq:.6} >= {limit:.6} at n_max = {n_max}"
    )]
    DisplacementBudget {
        alpha_sq: f64,
        limit: f64,
        n_max: usize,
    },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("increase n_max: tail mass {tail:.3e} above the last {margin} levels of n_max = {n_max}")]
    TailMass {
        tail: f64,
        margin: usize,
        n_max: usize,
    },

    #[error("branch inconsistency: 1/N^2 = {re:.6e} {im:+.3e}i is not real positive")]
    BranchInconsistency { re: f64, im: f64 },

    #[error("degenerate multiplet at r=0 for m != 0 (D = {size}, m = {member})")]
    DegenerateMultiplet { size: usize, member: usize },

    #[error("degenerate higher multiplet: superposition norm {norm:.3e} (p = {order}, D = {size}, m = {member}, r_p = {strength})")]
    DegenerateHigherMultiplet {
        order: u32,
        size: usize,
        member: usize,
        strength: f64,
        norm: f64,
    },

    #[error("invalid multiplet specification: {0}")]
    InvalidSpec(String),

    #[error("n_max insufficient for (p = {order}, r_p = {strength}): state changed by {delta:.3e} on doubling to n_max = {n_max}")]
    TruncationUnstable {
        order: u32,
        strength: f64,
        delta: f64,
        n_max: usize,
    },

    #[error("states live in orthogonal-support sectors: ordinary {ordinary} vs higher-order {higher}")]
    SupportMismatch { ordinary: String, higher: String },

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),

    #[error("no interference oscillation at r = 0")]
    NoInterference,

    #[error("angle {0} outside the open interval (0, 2*pi)")]
    AngleOutOfRange(f64),

    #[error("phase-convention breach: imaginary residue {residue:.3e} in an assembled characteristic function")]
    PhaseConventionBreach { residue: f64 },

    #[error("canonical-transformation breach: |u|^2 - |v|^2 - 1 = {0:.3e}")]
    CanonicalBreach(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
