//! Reduced models and the geometry behind them: reduced right-hand sides and
//! closed forms, the Riccati base point, invariance residuals with Fraser
//! refinement, critical sets, hyperbolicity margins and the transcritical
//! normal form.

mod compare;
mod critical;
mod invariance;
mod kinds;
mod riccati;

pub use compare::{compare_on_grid, rqssa_sup_error, sup_error, ComparisonRow};
pub use critical::{
    critical_set, hyperbolicity_margin, normal_form_coefficients, Branch, Component,
    CriticalSetDescription, NormalForm, SingularPoint, Stability, Tfp, Vertex,
};
pub use invariance::{
    grid_derivative, invariance_residual, refine_manifold, residual_scale, sup_abs, CNullcline,
    FnManifold, Manifold, Refinement, SNullcline,
};
pub use kinds::{
    closed_form, initial_value, reconstruct, reduced_rhs, segel_initial_substrate,
    simulate_reduced, ClosedFormKind, ReducedModel, ReducedModelKind, ReducedVariable,
};
pub use riccati::{riccati_base_point, riccati_c_bar, RiccatiBasePoint};
