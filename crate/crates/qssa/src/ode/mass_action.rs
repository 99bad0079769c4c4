use nalgebra::DMatrix;
use serde::Serialize;

use super::config::IntegratorConfig;
use super::integrate::integrate;
use super::system::OdeSystem;
use super::trajectory::Trajectory;
use crate::error::Result;
use crate::mm::{derive_constants, RateParameters};

/// State of the full mechanism. Free enzyme e = e0 − c is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MMState {
    pub s: f64,
    pub c: f64,
    pub p: f64,
}

impl MMState {
    pub fn initial(params: &RateParameters) -> Self {
        Self {
            s: params.s0,
            c: 0.0,
            p: 0.0,
        }
    }

    pub fn e(&self, params: &RateParameters) -> f64 {
        params.e0 - self.c
    }

    pub fn to_vec(self) -> Vec<f64> {
        vec![self.s, self.c, self.p]
    }
}

/// (ds/dt, dc/dt, dp/dt) of the mass-action system.
pub fn mass_action_rhs(state: &MMState, params: &RateParameters) -> (f64, f64, f64) {
    let bind = params.k1 * (params.e0 - state.c) * state.s;
    let unbind = params.k_off * state.c;
    let cat = params.k_cat * state.c;
    (-bind + unbind, bind - unbind - cat, cat)
}

#[derive(Debug, Clone, Copy)]
pub struct MassAction {
    pub params: RateParameters,
}

impl MassAction {
    pub fn new(params: RateParameters) -> Self {
        Self { params }
    }
}

impl OdeSystem for MassAction {
    fn dim(&self) -> usize {
        3
    }

    fn rhs(&self, _t: f64, y: &[f64], dydt: &mut [f64]) {
        let st = MMState {
            s: y[0],
            c: y[1],
            p: y[2],
        };
        let (ds, dc, dp) = mass_action_rhs(&st, &self.params);
        dydt[0] = ds;
        dydt[1] = dc;
        dydt[2] = dp;
    }

    /// Columns sum to zero, so Newton updates conserve s + c + p exactly.
    fn jacobian(&self, _t: f64, y: &[f64], jac: &mut DMatrix<f64>) {
        let RateParameters {
            k1,
            k_off,
            k_cat,
            e0,
            ..
        } = self.params;
        let (s, c) = (y[0], y[1]);
        let a = k1 * (e0 - c);
        let b = k1 * s + k_off;
        jac[(0, 0)] = -a;
        jac[(0, 1)] = b;
        jac[(0, 2)] = 0.0;
        jac[(1, 0)] = a;
        jac[(1, 1)] = -b - k_cat;
        jac[(1, 2)] = 0.0;
        jac[(2, 0)] = 0.0;
        jac[(2, 1)] = k_cat;
        jac[(2, 2)] = 0.0;
    }
}

/// Tight tolerances for runs that serve as ground truth: rtol 1e-10 and an
/// absolute floor well below the smallest relevant concentration scale.
pub fn reference_config(params: &RateParameters) -> IntegratorConfig {
    let lambda = derive_constants(params).lambda;
    let floor = lambda.min(params.s0).min(params.e0);
    IntegratorConfig::with_tolerances(1e-10, 1e-13 * floor.max(f64::MIN_POSITIVE))
}

/// Integrate the mass-action system from (s0, 0, 0).
pub fn simulate(params: &RateParameters, t_end: f64, cfg: &IntegratorConfig) -> Result<Trajectory> {
    params.validate()?;
    let sys = MassAction::new(*params);
    let mut tr = integrate(&sys, &MMState::initial(params).to_vec(), (0.0, t_end), cfg)?;
    tr.meta.model = "mass_action".to_string();
    tr.meta.params = Some(*params);
    Ok(tr)
}

/// Largest |s + c + p − s0| along a mass-action trajectory.
pub fn conservation_defect(traj: &Trajectory, s0: f64) -> f64 {
    traj.states
        .iter()
        .map(|y| (y[0] + y[1] + y[2] - s0).abs())
        .fold(0.0, f64::max)
}
