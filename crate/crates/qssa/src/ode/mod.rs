//! Adaptive integration of small ODE systems.
//!
//! Explicit Dormand–Prince 5(4) for non-stiff stretches, an L-stable SDIRK
//! of order 4 for stiff ones, and an AUTO mode that starts explicit and hands
//! over once the step size is pinned by the explicit stability region.
//! Accepted steps keep their derivatives so trajectories support cubic
//! Hermite dense output.

mod config;
mod dopri;
mod integrate;
mod mass_action;
mod sdirk;
mod system;
mod trajectory;
mod transient;

pub use config::{IntegratorConfig, Method};
pub use integrate::integrate;
pub use mass_action::{
    conservation_defect, mass_action_rhs, reference_config, simulate, MMState, MassAction,
};
pub use system::{FnSystem, OdeSystem};
pub use trajectory::{Trajectory, TrajectoryMeta};
pub use transient::detect_transient_end;

/// `n` log-spaced points from `t_min` to `t_max`, inclusive.
pub fn log_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![t_max];
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let mut g: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    g[0] = t_min;
    g[n - 1] = t_max;
    g.dedup();
    g
}

/// `n` evenly spaced points from `lo` to `hi`, inclusive.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![hi];
    }
    let mut g: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    g[n - 1] = hi;
    g
}
