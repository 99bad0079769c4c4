use nalgebra::DMatrix;

use super::config::{IntegratorConfig, Method};
use super::system::OdeSystem;
use super::trajectory::{Trajectory, TrajectoryMeta};
use super::{dopri, sdirk};
use crate::error::{Error, Result};

/// Linear stability boundary of DOPRI5 along the negative real axis.
const STIFF_BOUND: f64 = 3.25;
const STIFF_STEPS_TO_SWITCH: usize = 15;
const NONSTIFF_STEPS_TO_RESET: usize = 6;
const MAX_NEGATIVE_REJECTIONS: usize = 60;

fn rms_scaled(err: &[f64], y0: &[f64], y1: &[f64], rtol: f64, atol: f64) -> f64 {
    let n = err.len();
    let s: f64 = (0..n)
        .map(|i| {
            let sc = atol + rtol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (s / n as f64).sqrt()
}

fn initial_step<S: OdeSystem + ?Sized>(
    sys: &S,
    t0: f64,
    y0: &[f64],
    f0: &[f64],
    cfg: &IntegratorConfig,
    span: f64,
) -> f64 {
    let n = y0.len();
    let sc: Vec<f64> = y0.iter().map(|y| cfg.atol + cfg.rtol * y.abs()).collect();
    let norm = |v: &[f64]| {
        (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n as f64).sqrt()
    };
    let d0 = norm(y0);
    let d1 = norm(f0);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(span).min(cfg.max_step);
    let y1: Vec<f64> = (0..n).map(|i| y0[i] + h0 * f0[i]).collect();
    let mut f1 = vec![0.0; n];
    sys.rhs(t0 + h0, &y1, &mut f1);
    let df: Vec<f64> = (0..n).map(|i| f1[i] - f0[i]).collect();
    let d2 = norm(&df) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span).min(cfg.max_step)
}

/// Integrate `sys` from `y0` over `t_span` with adaptive error control.
///
/// Steps are accepted when the RMS of the embedded error, scaled by
/// `atol + rtol·|y|`, is at most one. Steps that would leave a component
/// below `-atol` are rejected and retried with a smaller step, unless
/// `nonnegative` is off.
pub fn integrate<S: OdeSystem + ?Sized>(
    sys: &S,
    y0: &[f64],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite() && t1 >= t0) {
        return Err(Error::InvalidConfig(format!(
            "time span ({t0}, {t1}) must be finite and ordered"
        )));
    }
    let n = sys.dim();
    if y0.len() != n {
        return Err(Error::InvalidConfig(format!(
            "initial state has {} components, system has {n}",
            y0.len()
        )));
    }

    let grid: Vec<f64> = cfg
        .output_times
        .as_ref()
        .map(|g| g.iter().copied().filter(|&t| t > t0 && t <= t1).collect())
        .unwrap_or_default();
    let keep_all = cfg.output_times.is_none() || cfg.dense_output;
    let t0_in_grid = cfg.output_times.as_ref().is_some_and(|g| g.contains(&t0));
    // stops: grid points then the end of the span
    let mut stops = grid.clone();
    if stops.last().is_none_or(|&l| l < t1) {
        stops.push(t1);
    }
    let is_grid_stop: Vec<bool> = stops
        .iter()
        .map(|s| grid.binary_search_by(|g| g.total_cmp(s)).is_ok())
        .collect();

    let mut meta = TrajectoryMeta::new(cfg.rtol, cfg.atol, cfg.method);
    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        derivatives: Vec::new(),
        meta: TrajectoryMeta::new(cfg.rtol, cfg.atol, cfg.method),
    };

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut f = vec![0.0; n];
    sys.rhs(t, &y, &mut f);
    meta.rhs_evals += 1;
    if keep_all || t0_in_grid {
        traj.times.push(t);
        traj.states.push(y.clone());
        traj.derivatives.push(f.clone());
    }
    if t1 == t0 {
        traj.meta = meta;
        return Ok(traj);
    }

    let mut implicit = cfg.method == Method::ImplicitAdaptive;
    let mut h = cfg
        .initial_step
        .unwrap_or_else(|| initial_step(sys, t0, &y, &f, cfg, t1 - t0));
    let mut jac = DMatrix::<f64>::zeros(n, n);
    let mut jac_fresh = false;
    let mut stiff_count = 0usize;
    let mut nonstiff_count = 0usize;
    let mut neg_streak = 0usize;
    let mut last_rejected = false;
    let mut stop_idx = 0usize;
    let mut attempts = 0usize;

    while stop_idx < stops.len() {
        attempts += 1;
        if attempts > cfg.max_steps {
            traj.meta = meta;
            return Err(Error::TooManySteps {
                t,
                max_steps: cfg.max_steps,
            });
        }
        let next_stop = stops[stop_idx];
        h = h.min(cfg.max_step);
        let h_natural = h;
        let mut land = false;
        if t + 1.01 * h >= next_stop {
            h = next_stop - t;
            land = true;
        }
        if h <= 8.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) || h <= 0.0 {
            traj.meta = meta;
            return Err(Error::StepUnderflow { t, h });
        }

        let (y_new, err, h_rho, fsal) = if implicit {
            if !jac_fresh {
                sys.jacobian(t, &y, &mut jac);
                meta.jacobian_evals += 1;
                jac_fresh = true;
            }
            let scale: Vec<f64> = y.iter().map(|v| cfg.atol + cfg.rtol * v.abs()).collect();
            match sdirk::step(sys, t, &y, &f, &jac, h, &scale) {
                sdirk::ImplicitOutcome::Done(s) => {
                    meta.rhs_evals += s.rhs_evals;
                    (s.y, s.err, 0.0, None)
                }
                sdirk::ImplicitOutcome::NewtonFailure { rhs_evals } => {
                    meta.rhs_evals += rhs_evals;
                    meta.steps_rejected += 1;
                    h *= 0.25;
                    last_rejected = true;
                    continue;
                }
            }
        } else {
            let s = dopri::step(sys, t, &y, &f, h);
            meta.rhs_evals += 6;
            (s.y, s.err, s.h_rho, Some(s.f))
        };

        let errn = rms_scaled(&err, &y, &y_new, cfg.rtol, cfg.atol);
        let order_exp = if implicit { 0.25 } else { 0.2 };
        if !errn.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            meta.steps_rejected += 1;
            h *= 0.2;
            last_rejected = true;
            continue;
        }
        if errn > 1.0 {
            meta.steps_rejected += 1;
            h *= (0.9 * errn.powf(-order_exp)).clamp(0.2, 0.9);
            last_rejected = true;
            continue;
        }
        if let Some(idx) = y_new.iter().position(|&v| cfg.nonnegative && v < -cfg.atol) {
            meta.steps_rejected += 1;
            neg_streak += 1;
            if neg_streak > MAX_NEGATIVE_REJECTIONS {
                traj.meta = meta;
                return Err(Error::NegativeState { t, index: idx });
            }
            h *= 0.5;
            last_rejected = true;
            continue;
        }
        neg_streak = 0;

        // accept
        let t_new = if land { next_stop } else { t + h };
        let f_new = match fsal {
            // explicit stage 7 sits at t + h, which is t_new unless landing rounded it
            Some(k7) if t + h == t_new => k7,
            _ => {
                let mut fv = vec![0.0; n];
                sys.rhs(t_new, &y_new, &mut fv);
                meta.rhs_evals += 1;
                fv
            }
        };
        meta.steps_accepted += 1;
        meta.local_error_sum += err.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
        t = t_new;
        y = y_new;
        f = f_new;
        jac_fresh = false;
        let on_grid = land && is_grid_stop[stop_idx];
        if land {
            stop_idx += 1;
        }
        if keep_all || on_grid {
            traj.times.push(t);
            traj.states.push(y.clone());
            traj.derivatives.push(f.clone());
        }

        if !implicit && cfg.method == Method::Auto {
            if h_rho > STIFF_BOUND {
                nonstiff_count = 0;
                stiff_count += 1;
                if stiff_count >= STIFF_STEPS_TO_SWITCH {
                    implicit = true;
                    meta.method_used = Method::ImplicitAdaptive;
                    meta.switched_at = Some(t);
                    meta.notes
                        .push(format!("stiffness detected, implicit from t = {t}"));
                }
            } else {
                nonstiff_count += 1;
                if nonstiff_count >= NONSTIFF_STEPS_TO_RESET {
                    stiff_count = 0;
                }
            }
        }

        let grow_cap = if last_rejected { 1.0 } else { 5.0 };
        let fac = if errn == 0.0 {
            grow_cap
        } else {
            (0.9 * errn.powf(-order_exp)).clamp(0.2, grow_cap)
        };
        h *= fac;
        if land {
            h = h.max(h_natural.min(h_natural * grow_cap));
        }
        last_rejected = false;
    }

    if cfg.method == Method::Auto && !implicit {
        meta.method_used = Method::ExplicitAdaptive;
    }
    traj.meta = meta;
    Ok(traj)
}
