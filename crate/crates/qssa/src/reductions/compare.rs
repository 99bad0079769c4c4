use serde::Serialize;

use super::kinds::{
    closed_form, reconstruct, simulate_reduced, ClosedFormKind, ReducedModelKind, ReducedVariable,
};
use crate::error::{Error, Result};
use crate::mm::{derive_constants, RateParameters};
use crate::ode::{reference_config, simulate};

/// Mass action against one reduction at a single time.
///
/// Relative errors are NaN where the reference value is below 1e-6 of its
/// scale (λ for c, s0 for p); near zero they measure round-off, not the
/// reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub t: f64,
    pub c_true: f64,
    pub c_reduced: f64,
    pub relerr_c: f64,
    pub p_true: f64,
    pub p_reduced: f64,
    pub relerr_p: f64,
    pub s_true: f64,
    pub s_reduced: f64,
}

const REL_FLOOR: f64 = 1e-6;

fn relerr(truth: f64, approx: f64, scale: f64) -> f64 {
    if truth.abs() < REL_FLOOR * scale {
        f64::NAN
    } else {
        (approx - truth).abs() / truth.abs()
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() || times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidConfig(
            "comparison times must be finite and >= 0".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "comparison times must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Reference mass action and reduction `kind`, both landing exactly on
/// `times` (which should start at 0), so no interpolation enters the errors.
pub fn compare_on_grid(
    kind: ReducedModelKind,
    params: &RateParameters,
    times: &[f64],
) -> Result<Vec<ComparisonRow>> {
    check_times(times)?;
    let t_end = *times.last().unwrap();
    let cfg = reference_config(params)
        .output_times(times.to_vec())
        .dense(false);
    let truth = simulate(params, t_end, &cfg)?.states;
    let reduced: Vec<f64> = if kind == ReducedModelKind::Rqssa {
        times
            .iter()
            .map(|&t| closed_form(ClosedFormKind::RqssaP, t, params))
            .collect()
    } else {
        let red = simulate_reduced(kind, params, t_end, &cfg)?;
        red.states.into_iter().map(|y| y[0]).collect()
    };
    let lambda = derive_constants(params).lambda;
    Ok(times
        .iter()
        .zip(truth.iter().zip(&reduced))
        .map(|(&t, (y, &x))| {
            let r = reconstruct(kind, x, params);
            ComparisonRow {
                t,
                c_true: y[1],
                c_reduced: r.c,
                relerr_c: relerr(y[1], r.c, lambda),
                p_true: y[2],
                p_reduced: r.p,
                relerr_p: relerr(y[2], r.p, params.s0),
                s_true: y[0],
                s_reduced: r.s,
            }
        })
        .collect())
}

/// sup |x_true − x_reduced| over rows with `t` in `window`, where x is the
/// variable the reduction evolves (s or p).
pub fn sup_error(kind: ReducedModelKind, rows: &[ComparisonRow], window: (f64, f64)) -> f64 {
    rows.iter()
        .filter(|r| r.t >= window.0 && r.t <= window.1)
        .map(|r| match kind.variable() {
            ReducedVariable::Substrate => (r.s_true - r.s_reduced).abs(),
            ReducedVariable::Product => (r.p_true - r.p_reduced).abs(),
        })
        .fold(0.0, f64::max)
}

/// sup_t |p − s0(1 − e^(−k₂t))|/s0 over every accepted step of a reference
/// run to `t_end`; the closed form is exact at each node.
pub fn rqssa_sup_error(params: &RateParameters, t_end: f64) -> Result<f64> {
    let tr = simulate(params, t_end, &reference_config(params))?;
    Ok(tr
        .times
        .iter()
        .zip(&tr.states)
        .map(|(&t, y)| (y[2] - closed_form(ClosedFormKind::RqssaP, t, params)).abs())
        .fold(0.0, f64::max)
        / params.s0)
}
