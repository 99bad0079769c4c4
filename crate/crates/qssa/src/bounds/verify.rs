use serde::Serialize;

use super::envelope::{Envelope, Quantity};
use crate::error::{Error, Result};
use crate::mm::{timescales, RateParameters};
use crate::ode::{log_grid, reference_config, simulate, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginSample {
    pub t: f64,
    /// Signed value of the bounded quantity.
    pub quantity: f64,
    pub envelope: f64,
    /// envelope·(1 + slack) + resolution − |quantity|
    pub margin: f64,
    /// How finely the trajectory resolves the quantity at this sample.
    pub resolution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub holds: bool,
    /// max(0, −min margin)
    pub max_violation: f64,
    pub min_margin: f64,
    pub slack: f64,
    /// Samples that pass only thanks to the resolution floor.
    pub unresolved_samples: usize,
    pub samples: Vec<MarginSample>,
    pub limsup_estimate: Option<f64>,
    pub tail_window: Option<(f64, f64)>,
}

pub const DEFAULT_SLACK: f64 = 1e-6;
pub const DEFAULT_TAIL_FRACTION: f64 = 0.2;

/// Points in the log-spaced landing grid of verification runs.
const LOG_SAMPLES: usize = 200;

/// Allowance for global over local integration error in the resolution floor.
pub const RESOLUTION_FACTOR: f64 = 10.0;

fn resolve(traj: &Trajectory, env: &Envelope) -> Result<(Quantity, RateParameters)> {
    let quantity = env
        .quantity
        .ok_or_else(|| Error::InvalidConfig("envelope has no associated quantity".into()))?;
    let params = traj
        .meta
        .params
        .ok_or_else(|| Error::InvalidConfig("trajectory carries no rate parameters".into()))?;
    if traj.dim() < quantity.components_needed() {
        return Err(Error::QuantityUnavailable {
            need: quantity.components_needed(),
            have: traj.dim(),
        });
    }
    Ok((quantity, params))
}

/// A run length whose tail window is long past every transient: each
/// non-vacuous envelope needs A·e^(−rt) well below B before the last
/// `DEFAULT_TAIL_FRACTION` of the run starts.
pub fn verification_horizon(envelopes: &[Envelope]) -> f64 {
    envelopes
        .iter()
        .filter(|e| e.r > 0.0 && e.r.is_finite())
        .map(|e| {
            let settle = if !e.vacuous && e.b > 0.0 && e.a > 0.0 {
                (e.a / e.b).ln().max(0.0) + 7.0
            } else {
                0.0
            };
            (5.0 + settle) / e.r / (1.0 - DEFAULT_TAIL_FRACTION)
        })
        .fold(0.0, f64::max)
}

/// Reference mass-action run for verification: the integrator lands exactly
/// on a log-spaced grid from a hundredth of the fast timescale to `t_end`,
/// and every accepted step is kept as well.
pub fn verification_trajectory(params: &RateParameters, t_end: f64) -> Result<Trajectory> {
    let t_c = timescales(params).t_c;
    let t_first = (1e-2 * t_c).min(1e-3 * t_end);
    let cfg = reference_config(params)
        .output_times(log_grid(t_first, t_end, LOG_SAMPLES))
        .dense(true);
    simulate(params, t_end, &cfg)
}

/// Pointwise check of `env` at every stored sample of a mass-action
/// trajectory. Samples are not interpolated: cubic Hermite dense output is
/// far too coarse for offsets that sit eight digits below the state, so a
/// log-spaced grid has to be part of the trajectory itself (see
/// [`verification_trajectory`]).
///
/// Besides the relative `slack`, each sample gets a resolution floor of
/// `RESOLUTION_FACTOR·(rtol·scale + atol)`, where `scale` is the size of the
/// terms that cancel in the quantity and the tolerances are the trajectory's.
/// Differences below it are not resolved by the integration and are counted
/// in `unresolved_samples` instead of being called violations.
pub fn verify(traj: &Trajectory, env: &Envelope, slack: f64) -> Result<BoundReport> {
    let (quantity, params) = resolve(traj, env)?;
    if traj.is_empty() {
        return Err(Error::InvalidConfig("empty trajectory".into()));
    }
    let (rtol, atol) = (traj.meta.rtol, traj.meta.atol);
    let samples: Vec<MarginSample> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, x)| {
            let q = quantity.eval(x, &params);
            let e = env.value(t);
            let resolution =
                RESOLUTION_FACTOR * (rtol * quantity.cancellation_scale(x, &params) + atol);
            MarginSample {
                t,
                quantity: q,
                envelope: e,
                margin: e * (1.0 + slack) + resolution - q.abs(),
                resolution,
            }
        })
        .collect();
    let unresolved_samples = samples
        .iter()
        .filter(|s| s.margin >= 0.0 && s.margin < s.resolution)
        .count();
    let min_margin = samples.iter().fold(f64::INFINITY, |m, s| m.min(s.margin));
    let max_violation = (-min_margin).max(0.0);
    let limsup = estimate_limsup(traj, env, DEFAULT_TAIL_FRACTION).ok();
    let tail = limsup.map(|_| tail_window(traj, DEFAULT_TAIL_FRACTION));
    Ok(BoundReport {
        holds: max_violation == 0.0,
        max_violation,
        min_margin,
        slack,
        unresolved_samples,
        samples,
        limsup_estimate: limsup,
        tail_window: tail,
    })
}

fn tail_window(traj: &Trajectory, tail_fraction: f64) -> (f64, f64) {
    let (t0, t1) = (traj.times[0], traj.t_end());
    (t1 - tail_fraction * (t1 - t0), t1)
}

/// max |quantity| over the last `tail_fraction` of the trajectory's span.
///
/// The window has to start after five decay times of the envelope's
/// exponential so the result speaks to the long-time offset only.
pub fn estimate_limsup(traj: &Trajectory, env: &Envelope, tail_fraction: f64) -> Result<f64> {
    let (quantity, params) = resolve(traj, env)?;
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "tail fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let (t_start, _) = tail_window(traj, tail_fraction);
    if env.r > 0.0 && env.a > 0.0 {
        let required = 5.0 / env.r;
        if t_start < required {
            return Err(Error::WindowTooShort { t_start, required });
        }
    }
    Ok(traj
        .times
        .iter()
        .zip(&traj.states)
        .filter(|(t, _)| **t >= t_start)
        .fold(0.0, |m, (_, x)| m.max(quantity.eval(x, &params).abs())))
}
