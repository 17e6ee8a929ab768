//! Numerical calculus around the Hankel transform on `(0, ∞)`.
//!
//! The crate provides:
//!
//! - evaluation of Bessel kernels `J_ν` and `j_ν(w) = w^{1/2} J_ν(w)` for real
//!   order `ν ≥ -1/2` ([`bessel`]),
//! - an exact closed family of Gaussian–polynomial test functions together
//!   with a generic sampled representation ([`functions`]),
//! - the ladder operators `N_μ`, `M_μ` and the Bessel operator
//!   `S_μ = M_μ N_μ` acting exactly on the closed family ([`diffops`]),
//! - semi-infinite panel quadrature with oscillatory splitting and
//!   alternating-series acceleration ([`quadrature`]),
//! - the Hankel transform, both by quadrature and exactly on the closed
//!   family, with its operational identities ([`hankel`]),
//! - Hankel translation and convolution through the triple-Bessel kernel and
//!   through the spectral multiplier route ([`translation`]),
//! - weight sequences, Gevrey-type weighted sup-seminorms and membership
//!   estimation ([`gevrey`]),
//! - pseudo-differential operators with a validated symbol catalog, the
//!   associated constants algebra and numerical continuity evidence ([`pdo`]).
//!
//! All operations are deterministic: parallel execution (enabled by the
//! default `parallel` feature) only distributes independent evaluations and
//! assembles results in a fixed order, so outputs are bitwise identical with
//! the feature on or off.

pub mod bessel;
pub mod diffops;
pub mod functions;
pub mod gevrey;
pub mod hankel;
pub mod pdo;
pub mod quadrature;
pub mod translation;

mod dd;
mod numeric;
mod parallel;

pub use bessel::BesselOrder;
pub use functions::{GaussHermiteFunction, RadialFunction, SampledFunction};
pub use quadrature::{IntegralResult, QuadratureSpec};

use thiserror::Error;

/// Errors produced by the operator calculus.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Bessel order below the supported range `ν ≥ -1/2`.
    #[error("invalid order {0}: must be finite and ≥ -1/2")]
    InvalidOrder(f64),
    /// An order-lowering identity would need an order below `-1/2`.
    #[error("order underflow: {0}")]
    OrderUnderflow(String),
    /// A family operation received a function with the wrong order index.
    #[error("family mismatch: operator order {op} vs function order {func}")]
    FamilyMismatch { op: f64, func: f64 },
    /// A quadrature did not reach its tolerance.
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    /// Two routes that must agree disagreed beyond tolerance.
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    /// A conditionally convergent integral was requested without acceleration.
    #[error("conditionally convergent integral requires alternating-series acceleration: {0}")]
    AccelerationRequired(String),
    /// Log-space sequence arithmetic left the representable range.
    #[error("sequence overflow at index {0}")]
    SequenceOverflow(usize),
    /// Symbol catalog has no exact derivative rule for the request.
    #[error("no exact derivative rule for symbol: {0}")]
    DerivativeRuleMissing(String),
    /// A derived constant needs a sequence fit that was not supplied.
    #[error("missing fitted constant: {0}")]
    MissingConstant(String),
    /// Malformed input value or configuration.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
