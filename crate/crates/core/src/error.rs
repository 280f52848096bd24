use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PnError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sample length {actual} does not match grid size {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("seminorm of order s = {s} diverges for a profile with an arctan background (requires s > 1/2)")]
    DivergentSeminorm { s: f64 },

    #[error("misfit integrand does not decay at the domain ends (end values {left:.3e}, {right:.3e})")]
    DivergentMisfit { left: f64, right: f64 },

    #[error("potential table: {0}")]
    PotentialTable(String),

    #[error("profile has {crossings} zero crossings, expected exactly one")]
    ZeroCrossing { crossings: usize },

    #[error("fit window [{lo:.4}, {hi:.4}] leaves the grid")]
    FitWindow { lo: f64, hi: f64 },

    #[error("derivative order {0} not supported (0, 1 or 2)")]
    DerivativeOrder(usize),

    #[error("solver did not converge after {iterations} iterations (residual L-inf {linf:.3e}, L2 {l2:.3e})")]
    NotConverged { iterations: usize, linf: f64, l2: f64 },

    #[error("time step underflow at t = {t}: dt = {dt:.3e} after repeated halving")]
    StepUnderflow { t: f64, dt: f64 },

    #[error("dynamics: no reference static profile set")]
    MissingReference,

    #[error("lambda seminorm: derivative order m = {m} exceeds floor(s) for s = {s}")]
    LambdaOrder { s: f64, m: usize },

    #[error("region exceeds sampled domain: {0}")]
    OutsideDomain(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, PnError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> PnError {
    PnError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
