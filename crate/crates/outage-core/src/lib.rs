//! Outage probability of Kronecker-correlated Rayleigh MIMO channels.
//!
//! Three mutually validating evaluation routes:
//!
//! * [`exact`]: the exact outage CDF via a Mellin–Barnes contour integral
//!   over an alternating permutation sum of Tricomi functions,
//! * [`asymptotic`]: the high-SNR power-law asymptote with its
//!   diversity-order / coding-gain / correlation-penalty decomposition,
//! * [`montecarlo`]: reproducible parallel channel simulation.
//!
//! [`specfun`] holds the shared special-function kernel (complex log-gamma,
//! Tricomi Ψ(1,β;x), vertical-line quadrature, the integer-parameter Meijer G)
//! and [`channel`] the correlation-matrix domain model.

pub mod asymptotic;
pub mod channel;
pub mod error;
pub mod exact;
pub mod montecarlo;
pub mod specfun;

pub use error::{OutageError, Result};
