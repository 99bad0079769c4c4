//! Synthetic progress curves and least-squares fitting of reduced models,
//! with a regime report that says whether the fitted model should be trusted.

mod fit;
mod lm;
mod synth;

pub use fit::{
    fit, model_parameters, partial_regime, predict, FitResult, FitSpec, FreeParameter,
    CONDITION_WARNING, SIGNAL_FLOOR,
};
pub use lm::{levenberg_marquardt, scaled_condition_number, LmOptions, LmOutcome, Termination};
pub use synth::{synthesize, ProgressCurve};
