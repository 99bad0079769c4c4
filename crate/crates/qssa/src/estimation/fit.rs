use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::lm::{levenberg_marquardt, scaled_condition_number, LmOptions, Termination};
use super::synth::ProgressCurve;
use crate::error::{Error, Result};
use crate::mm::{complex_roots, regime_from_values, RegimeReport, Thresholds};
use crate::ode::{integrate, FnSystem, IntegratorConfig};
use crate::reductions::ReducedModelKind;

/// Dynamic ranges below this are treated as no signal even for noiseless curves.
pub const SIGNAL_FLOOR: f64 = 1e-10;

/// Jacobian condition numbers above this flag the estimates as poorly identified.
pub const CONDITION_WARNING: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeParameter {
    pub name: String,
    pub initial: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSpec {
    pub model: ReducedModelKind,
    pub free: Vec<FreeParameter>,
    pub fixed: BTreeMap<String, f64>,
    /// Constants outside the model (k1, k_off, K_M, ...) used only for the regime report.
    pub known: BTreeMap<String, f64>,
    pub weights: Option<Vec<f64>>,
    pub options: LmOptions,
    pub thresholds: Thresholds,
}

impl FitSpec {
    pub fn new(model: ReducedModelKind) -> Self {
        Self {
            model,
            free: Vec::new(),
            fixed: BTreeMap::new(),
            known: BTreeMap::new(),
            weights: None,
            options: LmOptions::default(),
            thresholds: Thresholds::default(),
        }
    }

    /// Free parameter with the default box [0, ∞).
    pub fn free(self, name: &str, initial: f64) -> Self {
        self.free_in(name, initial, 0.0, f64::INFINITY)
    }

    pub fn free_in(mut self, name: &str, initial: f64, lower: f64, upper: f64) -> Self {
        self.free.push(FreeParameter {
            name: name.to_string(),
            initial,
            lower,
            upper,
        });
        self
    }

    pub fn fixed(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.to_string(), value);
        self
    }

    pub fn known(mut self, name: &str, value: f64) -> Self {
        self.known.insert(name.to_string(), value);
        self
    }
}

/// Parameter names of each fittable model, in evaluation order.
pub fn model_parameters(model: ReducedModelKind) -> Result<&'static [&'static str]> {
    match model {
        ReducedModelKind::Rqssa => Ok(&["k_cat", "s0"]),
        ReducedModelKind::SqssaP => Ok(&["v", "k_m", "s0"]),
        ReducedModelKind::Tqssa | ReducedModelKind::TqssaPractice => {
            Ok(&["k_cat", "k_m", "e0", "s0"])
        }
        other => Err(Error::InvalidFitSpec(format!(
            "{other} cannot be fitted to a product curve"
        ))),
    }
}

/// p(t) of a reduced model from p(0) = 0. `values` follow [`model_parameters`].
///
/// ODE-defined models run the integrator at rtol 1e-10 and land on every
/// requested time, so the prediction is a deterministic function of its inputs.
pub fn predict(model: ReducedModelKind, values: &[f64], times: &[f64]) -> Result<Vec<f64>> {
    let names = model_parameters(model)?;
    if values.len() != names.len() {
        return Err(Error::InvalidFitSpec(format!(
            "{model} takes {} parameters, got {}",
            names.len(),
            values.len()
        )));
    }
    if model == ReducedModelKind::Rqssa {
        let (k_cat, s0) = (values[0], values[1]);
        return Ok(times.iter().map(|&t| s0 * -(-k_cat * t).exp_m1()).collect());
    }
    let s0 = *values.last().unwrap();
    let rhs: Box<dyn Fn(f64) -> f64> = match model {
        ReducedModelKind::SqssaP => {
            let (v, k_m) = (values[0], values[1]);
            Box::new(move |q| v * q / (k_m + q))
        }
        ReducedModelKind::Tqssa => {
            let (k_cat, k_m, e0) = (values[0], values[1], values[2]);
            Box::new(move |q| k_cat * complex_roots(e0, k_m, q).lower)
        }
        _ => {
            let (k_cat, k_m, e0) = (values[0], values[1], values[2]);
            Box::new(move |q| k_cat * e0 * q / (e0 + k_m + q))
        }
    };
    let mut out = vec![0.0; times.len()];
    let t_end = match times.last() {
        Some(&t) if t > 0.0 => t,
        _ => return Ok(out),
    };
    let sys = FnSystem::new(1, |_t, y: &[f64], dy: &mut [f64]| dy[0] = rhs(s0 - y[0]));
    let cfg = IntegratorConfig::with_tolerances(1e-10, 1e-12 * s0.abs().max(f64::MIN_POSITIVE))
        .output_times(times.to_vec())
        .dense(false);
    let tr = integrate(&sys, &[0.0], (0.0, t_end), &cfg)?;
    let offset = times.len() - tr.len();
    for (k, y) in tr.states.iter().enumerate() {
        out[offset + k] = y[0];
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: ReducedModelKind,
    /// Fitted values of the free parameters.
    pub estimates: BTreeMap<String, f64>,
    /// Every model parameter, free and fixed.
    pub parameters: BTreeMap<String, f64>,
    pub ssr: f64,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    pub ssr_history: Vec<f64>,
    pub condition_number: f64,
    pub condition_warning: bool,
    pub regime: RegimeReport,
    /// Model p at the curve's times, for overlays.
    pub fitted: Vec<f64>,
}

enum Slot {
    Free(usize),
    Fixed(f64),
}

fn resolve_slots(curve: &ProgressCurve, spec: &FitSpec, names: &[&str]) -> Result<Vec<Slot>> {
    let mut seen = std::collections::BTreeSet::new();
    for fp in &spec.free {
        if !names.contains(&fp.name.as_str()) {
            return Err(Error::InvalidFitSpec(format!(
                "'{}' is not a parameter of {}",
                fp.name, spec.model
            )));
        }
        if !seen.insert(fp.name.clone()) || spec.fixed.contains_key(&fp.name) {
            return Err(Error::InvalidFitSpec(format!("'{}' given twice", fp.name)));
        }
        if !(fp.lower <= fp.initial && fp.initial <= fp.upper) || !fp.initial.is_finite() {
            return Err(Error::InvalidFitSpec(format!(
                "initial guess {} for '{}' outside [{}, {}]",
                fp.initial, fp.name, fp.lower, fp.upper
            )));
        }
    }
    if let Some(name) = spec.fixed.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(Error::InvalidFitSpec(format!(
            "'{name}' is not a parameter of {}",
            spec.model
        )));
    }
    names
        .iter()
        .map(|&name| {
            if let Some(i) = spec.free.iter().position(|fp| fp.name == name) {
                return Ok(Slot::Free(i));
            }
            let from_curve = match name {
                "e0" => curve.e0,
                "s0" => curve.s0,
                _ => None,
            };
            spec.fixed
                .get(name)
                .copied()
                .or(from_curve)
                .map(Slot::Fixed)
                .ok_or_else(|| Error::InvalidFitSpec(format!("'{name}' is neither free nor fixed")))
        })
        .collect()
}

fn assemble(slots: &[Slot], x: &[f64]) -> Vec<f64> {
    slots
        .iter()
        .map(|s| match s {
            Slot::Free(i) => x[*i],
            Slot::Fixed(v) => *v,
        })
        .collect()
}

/// Least-squares fit of a reduced model to a progress curve.
pub fn fit(curve: &ProgressCurve, spec: &FitSpec) -> Result<FitResult> {
    curve.validate()?;
    let names = model_parameters(spec.model)?;
    let slots = resolve_slots(curve, spec, names)?;
    let n_free = spec.free.len();
    if n_free == 0 {
        return Err(Error::InvalidFitSpec("no free parameters".into()));
    }
    if curve.times.len() < 2 * n_free {
        return Err(Error::InvalidFitSpec(format!(
            "{} samples for {} free parameters, need at least {}",
            curve.times.len(),
            n_free,
            2 * n_free
        )));
    }
    let threshold = (10.0 * curve.noise_sd).max(SIGNAL_FLOOR);
    let range = curve.dynamic_range();
    if !(range >= threshold) {
        return Err(Error::InsufficientSignal { range, threshold });
    }
    let sqrt_w: Vec<f64> = match &spec.weights {
        Some(w) => {
            if w.len() != curve.times.len() || w.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                return Err(Error::InvalidFitSpec(
                    "weights must be finite, non-negative and one per sample".into(),
                ));
            }
            w.iter().map(|v| v.sqrt()).collect()
        }
        None => vec![1.0; curve.times.len()],
    };

    let residuals = |x: &[f64]| -> Result<Vec<f64>> {
        let pred = predict(spec.model, &assemble(&slots, x), &curve.times)?;
        Ok(pred
            .iter()
            .zip(&curve.p)
            .zip(&sqrt_w)
            .map(|((m, d), w)| w * (m - d))
            .collect())
    };
    let x0: Vec<f64> = spec.free.iter().map(|fp| fp.initial).collect();
    let lower: Vec<f64> = spec.free.iter().map(|fp| fp.lower).collect();
    let upper: Vec<f64> = spec.free.iter().map(|fp| fp.upper).collect();
    let out = levenberg_marquardt(residuals, &x0, &lower, &upper, &spec.options)?;

    let values = assemble(&slots, &out.x);
    let fitted = predict(spec.model, &values, &curve.times)?;
    let estimates = spec
        .free
        .iter()
        .zip(&out.x)
        .map(|(fp, v)| (fp.name.clone(), *v))
        .collect();
    let parameters: BTreeMap<String, f64> = names
        .iter()
        .zip(&values)
        .map(|(n, v)| (n.to_string(), *v))
        .collect();

    let mut context = spec.known.clone();
    if let Some(e0) = curve.e0 {
        context.entry("e0".into()).or_insert(e0);
    }
    if let Some(s0) = curve.s0 {
        context.entry("s0".into()).or_insert(s0);
    }
    for (k, v) in &parameters {
        context.insert(k.clone(), *v);
    }
    let condition_number = scaled_condition_number(&out.jacobian);

    Ok(FitResult {
        model: spec.model,
        estimates,
        parameters,
        ssr: out.ssr,
        iterations: out.iterations,
        converged: out.converged(),
        termination: out.termination,
        ssr_history: out.ssr_history,
        condition_number,
        condition_warning: condition_number > CONDITION_WARNING,
        regime: partial_regime(&context, &spec.thresholds),
        fitted,
    })
}

/// Regime verdicts from whichever constants are available. Qualifiers whose
/// inputs are missing come out as `Undetermined`.
///
/// Recognised names: k1, k_off, k_cat, v, k_m, e0, s0.
pub fn partial_regime(values: &BTreeMap<String, f64>, th: &Thresholds) -> RegimeReport {
    let get = |n: &str| values.get(n).copied();
    let e0 = get("e0");
    let s0 = get("s0");
    let k1 = get("k1");
    let k_off = get("k_off");
    let k_cat = get("k_cat").or_else(|| Some(get("v")? / e0?));
    let k_m = get("k_m").or_else(|| Some((k_off? + k_cat?) / k1?));
    let nu = k_cat.and_then(|kc| match (k_off, k1, k_m) {
        (Some(ko), _, _) => Some(kc / (ko + kc)),
        (None, Some(k1), Some(km)) => Some(kc / (k1 * km)),
        _ => None,
    });
    let nan = f64::NAN;
    let (e0v, s0v, kmv, nuv) = (
        e0.unwrap_or(nan),
        s0.unwrap_or(nan),
        k_m.unwrap_or(nan),
        nu.unwrap_or(nan),
    );
    let lambda = complex_roots(e0v, kmv, s0v).lower;
    let eps_under = kmv / (e0v - lambda);
    let lt_frac = if kmv == 0.0 {
        0.0
    } else {
        2.0 * kmv / (kmv + (kmv * kmv + 4.0 * e0v * kmv).sqrt())
    };
    let eps_lt = e0v / (kmv + e0v) * nuv * lt_frac;
    regime_from_values(
        e0v / kmv,
        eps_under,
        nuv,
        eps_lt,
        e0v / (kmv + s0v),
        kmv / (kmv + s0v),
        th,
    )
}
