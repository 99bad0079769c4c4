use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("step size underflow at t = {t} (h = {h}); retry with the implicit method")]
    StepUnderflow { t: f64, h: f64 },

    #[error("component {index} stays below -atol near t = {t} after repeated step rejection")]
    NegativeState { t: f64, index: usize },

    #[error("step budget of {max_steps} exhausted at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("complex concentration never exceeds atol; no transient to detect")]
    NoTransient,

    #[error("no transcritical point: s0/e0 = {ell} differs from 1")]
    NoTranscriticalPoint { ell: f64 },

    #[error("envelope {kind} needs a nonzero {divisor}")]
    DegenerateBound {
        kind: &'static str,
        divisor: &'static str,
    },

    #[error("trajectory has {have} components, {need} required")]
    QuantityUnavailable { need: usize, have: usize },

    #[error("tail window starts at t = {t_start}, needs t >= {required}")]
    WindowTooShort { t_start: f64, required: f64 },

    #[error("dynamic range {range} is below the signal threshold {threshold}")]
    InsufficientSignal { range: f64, threshold: f64 },

    #[error("invalid fit specification: {0}")]
    InvalidFitSpec(String),
}

impl Error {
    /// Short stable identifier, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::Domain { .. } => "Domain",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::NegativeState { .. } => "NegativeState",
            Error::TooManySteps { .. } => "TooManySteps",
            Error::NonFinite { .. } => "NonFinite",
            Error::NoTransient => "NoTransient",
            Error::NoTranscriticalPoint { .. } => "NoTranscriticalPoint",
            Error::DegenerateBound { .. } => "DegenerateBound",
            Error::QuantityUnavailable { .. } => "QuantityUnavailable",
            Error::WindowTooShort { .. } => "WindowTooShort",
            Error::InsufficientSignal { .. } => "InsufficientSignal",
            Error::InvalidFitSpec(_) => "InvalidFitSpec",
        }
    }
}
