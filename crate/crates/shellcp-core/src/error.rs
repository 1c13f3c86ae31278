//! Error taxonomy shared by every numerical routine in the crate.

use thiserror::Error;

/// Unified error type for solver operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (non-positive length, negative temperature, non-finite input, ...).
    #[error("domain error in {context}: {message}")]
    Domain { context: &'static str, message: String },

    /// The inputs are mathematically valid but outside the range this
    /// implementation supports (order caps, asymptotic validity, ...).
    #[error("capability error in {context}: {message}")]
    Capability { context: &'static str, message: String },

    /// A series or quadrature failed to reach the requested tolerance within
    /// its caps. Carries the partial result and the error bound achieved so
    /// callers can decide whether the partial value is still useful.
    #[error("convergence failure in {context}: bound {bound:e} exceeds tolerance (partial = {partial:e})")]
    Convergence {
        context: &'static str,
        partial: f64,
        bound: f64,
    },

    /// The analytically continued Jost function passed through (numerical)
    /// zero on the integration path; the integrand is singular there.
    #[error("continued Jost function vanishes near l = {l}, t = {t}")]
    JostZero { l: u32, t: f64 },

    /// A finite-difference or cancellation-limited computation lost all
    /// significant digits (e.g. a non-monotone Richardson table).
    #[error("precision loss in {context}: {message}")]
    Precision { context: &'static str, message: String },

    /// A root/threshold search could not bracket its target.
    #[error("search failure in {context}: {message}")]
    Search { context: &'static str, message: String },

    /// An asymptotic-law evaluation was requested outside its validity
    /// region; the message lists the violated inequalities with their slack.
    #[error("regime violation in {context}: {message}")]
    Regime { context: &'static str, message: String },
}

impl Error {
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain { context, message: message.into() }
    }

    pub fn capability(context: &'static str, message: impl Into<String>) -> Self {
        Error::Capability { context, message: message.into() }
    }

    pub fn precision(context: &'static str, message: impl Into<String>) -> Self {
        Error::Precision { context, message: message.into() }
    }

    pub fn search(context: &'static str, message: impl Into<String>) -> Self {
        Error::Search { context, message: message.into() }
    }

    pub fn regime(context: &'static str, message: impl Into<String>) -> Self {
        Error::Regime { context, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
