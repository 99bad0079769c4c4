use std::str::FromStr;

use clap::{Args, ValueEnum};
use qssa::bounds::{
    envelope, verification_horizon, verification_trajectory, verify, BoundKind, DEFAULT_SLACK,
};
use qssa::ode::{lin_grid, log_grid};
use qssa::reductions::{
    compare_on_grid, invariance_residual, residual_scale, rqssa_sup_error, sup_abs, sup_error,
    CNullcline, ReducedModelKind,
};
use qssa::RateParameters;
use rayon::prelude::*;

use crate::args::{ParamArgs, ParamSpec, RunArgs};
use crate::commands::{comparison_times, default_horizon};
use crate::error::{CliError, CliResult};
use crate::output::{records_to_csv, to_json, Format, Record, Sink};
use crate::records::{constants_record, envelopes_record, groups_record, timescales_record};

pub const DEFAULT_CAP: usize = 1_000_000;

/// One sweep axis, `name=log:lo:hi:n` or `name=lin:lo:hi:n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

const AXES: [&str; 7] = ["k1", "k_off", "k_cat", "e0", "s0", "k_m", "kappa"];

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, rest) = s
            .split_once('=')
            .ok_or_else(|| format!("expected name=log|lin:lo:hi:n, got '{s}'"))?;
        let name = match name.trim() {
            "koff" => "k_off",
            "kcat" => "k_cat",
            "km" => "k_m",
            other => other,
        };
        if !AXES.contains(&name) {
            return Err(format!(
                "unknown axis '{name}', expected one of {}",
                AXES.join(", ")
            ));
        }
        let parts: Vec<&str> = rest.split(':').collect();
        let [scale, lo, hi, n] = parts.as_slice() else {
            return Err(format!("axis '{name}': expected log|lin:lo:hi:n"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("axis '{name}': '{t}' is not a number"))
        };
        let (lo, hi) = (num(lo)?, num(hi)?);
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| format!("axis '{name}': '{n}' is not a count"))?;
        if n == 0 {
            return Err(format!("axis '{name}' needs at least one point"));
        }
        let values = match *scale {
            "log" if lo > 0.0 && hi > 0.0 => {
                if n == 1 {
                    vec![lo]
                } else {
                    log_grid(lo, hi, n)
                }
            }
            "log" => return Err(format!("axis '{name}': log ranges need positive bounds")),
            "lin" if n == 1 => vec![lo],
            "lin" => lin_grid(lo, hi, n),
            other => return Err(format!("axis '{name}': unknown scale '{other}'")),
        };
        Ok(Axis {
            name: name.to_string(),
            values,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepQuantity {
    /// Everything `constants` prints
    Constants,
    Groups,
    Timescales,
    /// A, r, B of every envelope
    Envelopes,
    /// Long-time offset estimate and verdict of every envelope
    Limsup,
    /// sup |p − s0(1 − e^(−k₂t))|/s0 over [0, t_end]
    RqssaError,
    /// sup error of every reduction over [0, t_end], divided by s0
    ReductionErrors,
    /// sup |R| of the c-nullcline, scaled and dimensional
    InvarianceResidual,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Axis as name=log|lin:lo:hi:n; repeat for a product grid (last axis varies fastest)
    #[arg(long = "grid", value_name = "AXIS", required = true)]
    pub grid: Vec<Axis>,
    #[arg(long = "quantity", value_enum, default_values_t = [SweepQuantity::Constants])]
    pub quantity: Vec<SweepQuantity>,
    /// Largest number of grid points accepted
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Comparison times per reduction for reduction_errors
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

/// Grid point `index` in row-major order over `axes`.
fn point(axes: &[Axis], mut index: usize) -> Vec<f64> {
    let mut out = vec![0.0; axes.len()];
    for (k, axis) in axes.iter().enumerate().rev() {
        let n = axis.values.len();
        out[k] = axis.values[index % n];
        index /= n;
    }
    out
}

fn quantity_record(q: SweepQuantity, p: &RateParameters, a: &SweepArgs) -> CliResult<Record> {
    let mut r = Record::default();
    match q {
        SweepQuantity::Constants => r = constants_record(p),
        SweepQuantity::Groups => r = groups_record(p),
        SweepQuantity::Timescales => r = timescales_record(p),
        SweepQuantity::Envelopes => r = envelopes_record(p),
        SweepQuantity::Limsup => {
            let envs: Vec<_> = BoundKind::ALL
                .iter()
                .map(|&k| (k, envelope(k, p).ok()))
                .collect();
            let usable: Vec<_> = envs.iter().filter_map(|(_, e)| e.clone()).collect();
            let t_end = a.run.t_end_or(verification_horizon(&usable))?;
            let tr = verification_trajectory(p, t_end)?;
            for (k, env) in &envs {
                let key = k.name().to_ascii_lowercase();
                let rep = env
                    .as_ref()
                    .map(|e| verify(&tr, e, DEFAULT_SLACK))
                    .transpose()?;
                r.num(
                    format!("{key}_limsup"),
                    rep.as_ref()
                        .and_then(|x| x.limsup_estimate)
                        .unwrap_or(f64::NAN),
                );
                r.flag(format!("{key}_holds"), rep.is_some_and(|x| x.holds));
            }
        }
        SweepQuantity::RqssaError => {
            let t_end = a.run.t_end_or(10.0 / p.k_cat)?;
            r.num("rqssa_error", rqssa_sup_error(p, t_end)?);
        }
        SweepQuantity::ReductionErrors => {
            let t_end = a.run.t_end_or(default_horizon(p))?;
            let times = comparison_times(p, t_end, a.points);
            for kind in ReducedModelKind::ALL {
                let rows = compare_on_grid(kind, p, &times)?;
                let key = kind.name().to_ascii_lowercase();
                r.num(
                    format!("{key}_sup_error"),
                    sup_error(kind, &rows, (0.0, t_end)) / p.s0,
                );
            }
        }
        SweepQuantity::InvarianceResidual => {
            let grid = lin_grid(1e-3 * p.s0, p.s0, 200);
            let raw = sup_abs(&invariance_residual(&CNullcline(*p), p, &grid));
            r.num("invariance_residual", raw * residual_scale(p));
            r.num("invariance_residual_dimensional", raw);
        }
    }
    Ok(r)
}

fn row(a: &SweepArgs, base: &ParamSpec, index: usize) -> CliResult<Record> {
    let values = point(&a.grid, index);
    let mut spec = *base;
    let mut rec = Record::default();
    for (axis, v) in a.grid.iter().zip(&values) {
        spec.set(&axis.name, *v)?;
        rec.num(axis.name.clone(), *v);
    }
    let p = spec.resolve()?;
    for &q in &a.quantity {
        rec.extend(quantity_record(q, &p, a)?);
    }
    Ok(rec)
}

pub fn sweep(a: &SweepArgs) -> CliResult<()> {
    let points = a
        .grid
        .iter()
        .try_fold(1usize, |acc, ax| acc.checked_mul(ax.values.len()))
        .unwrap_or(usize::MAX);
    if points > a.cap {
        return Err(CliError::GridTooLarge { points, cap: a.cap });
    }
    let base = a.params.spec()?;
    let rows: Vec<CliResult<Record>> = (0..points)
        .into_par_iter()
        .map(|i| row(a, &base, i))
        .collect();
    let rows: Vec<Record> = rows.into_iter().collect::<CliResult<_>>()?;
    let sink = Sink::new(a.run.out.as_deref())?;
    match a.run.format.unwrap_or(Format::Csv) {
        Format::Csv => sink.primary("sweep.csv", &records_to_csv(&rows)?),
        Format::Json => {
            let arr: Vec<_> = rows.iter().map(Record::to_json_value).collect();
            sink.primary("sweep.json", &to_json(&arr)?)
        }
    }
}
