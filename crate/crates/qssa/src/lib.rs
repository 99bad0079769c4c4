//! Michaelis–Menten kinetics under the quasi-steady-state lens.
//!
//! The crate is organised around the reaction `S + E <-> C -> E + P`:
//!
//! - [`mm`]: rate parameters, derived constants, small parameters, timescales
//!   and regime classification.
//! - [`ode`]: adaptive explicit/implicit integration of the mass-action system
//!   (or any small ODE) with dense output.
//! - [`reductions`]: reduced models, the Riccati base point, invariance
//!   residuals, Fraser refinement, critical sets and the transcritical normal form.
//! - [`bounds`]: energy-method error envelopes and their numerical verification.
//! - [`estimation`]: synthetic progress curves and Levenberg–Marquardt fitting
//!   of reduced models with validity gating.

pub mod bounds;
pub mod error;
pub mod estimation;
pub mod mm;
pub mod ode;
pub mod presets;
pub mod reductions;

pub use error::{Error, Result};
pub use mm::{
    classify_regime, derive_constants, dimensionless_groups, nullclines, timescales,
    DerivedConstants, DimensionlessGroups, RateParameters, RegimeReport, Thresholds, Timescales,
};
