//! Shared error type for all evaluation engines.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutageError {
    /// The input sits on (or too close to) a pole of the evaluated function.
    #[error("pole input: {0}")]
    PoleInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// An adaptive refinement stalled before reaching the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    NonConvergence { achieved: f64, requested: f64 },

    /// Contour-tail contributions stopped shrinking across successive doublings.
    #[error("contour tail failed to decay: last strip magnitudes {0:.3e}, {1:.3e}")]
    TailDivergence(f64, f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("spectrum trace {trace} must equal dimension {dim}")]
    TraceViolation { trace: f64, dim: usize },

    #[error("eigenvalues must be strictly positive (got {0})")]
    NonPositiveEigenvalue(f64),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    /// The alternating permutation sum lost too many significant digits.
    #[error("permutation sum lost {digits:.1} decimal digits to cancellation")]
    CancellationAlarm { digits: f64 },

    #[error("permutation sum supports Nt <= 8 (got {0})")]
    PermutationCap(usize),

    #[error("target outage {target:.3e} unreachable for rates in (0, {cap}]")]
    InfeasibleTarget { target: f64, cap: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("non-finite entry in input")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, OutageError>;
