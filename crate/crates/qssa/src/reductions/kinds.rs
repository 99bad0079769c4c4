use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::riccati::riccati_base_point;
use crate::error::{Error, Result};
use crate::mm::{complex_roots, timescales, RateParameters};
use crate::ode::{integrate, IntegratorConfig, MMState, OdeSystem, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReducedModelKind {
    /// ds/dt = −Vs/(K_M + s)
    SqssaS,
    /// dp/dt = V(s0 − p)/(K_M + s0 − p)
    SqssaP,
    /// dp/dt = k₂·h⁻(p)
    Tqssa,
    /// dp/dt = V(s0 − p)/(e0 + K_M + s0 − p)
    TqssaPractice,
    /// ds/dt = −Vs(s + K_S)/(e0K_S + (s + K_S)²)
    Extended,
    /// The sQSSA flow restarted from (√2 − 1)s0. Kept only as a refuted baseline.
    EqssaSegel,
    /// dp/dt = k₂(s0 − p)
    Rqssa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedVariable {
    Substrate,
    Product,
}

impl ReducedModelKind {
    pub const ALL: [ReducedModelKind; 7] = [
        Self::SqssaS,
        Self::SqssaP,
        Self::Tqssa,
        Self::TqssaPractice,
        Self::Extended,
        Self::EqssaSegel,
        Self::Rqssa,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::SqssaS => "SQSSA_S",
            Self::SqssaP => "SQSSA_P",
            Self::Tqssa => "TQSSA",
            Self::TqssaPractice => "TQSSA_PRACTICE",
            Self::Extended => "EXTENDED",
            Self::EqssaSegel => "EQSSA_SEGEL",
            Self::Rqssa => "RQSSA",
        }
    }

    pub fn variable(&self) -> ReducedVariable {
        match self {
            Self::SqssaS | Self::Extended | Self::EqssaSegel => ReducedVariable::Substrate,
            _ => ReducedVariable::Product,
        }
    }

    pub fn historical_refuted(&self) -> bool {
        matches!(self, Self::EqssaSegel)
    }
}

impl fmt::Display for ReducedModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReducedModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| format!("unknown reduced model '{s}'"))
    }
}

fn rhs_unchecked(kind: ReducedModelKind, x: f64, p: &RateParameters) -> f64 {
    let k_m = p.k_m();
    let v = p.v();
    match kind {
        ReducedModelKind::SqssaS | ReducedModelKind::EqssaSegel => -v * x / (k_m + x),
        ReducedModelKind::SqssaP => {
            let q = p.s0 - x;
            v * q / (k_m + q)
        }
        ReducedModelKind::Tqssa => p.k_cat * complex_roots(p.e0, k_m, p.s0 - x).lower,
        ReducedModelKind::TqssaPractice => {
            let q = p.s0 - x;
            v * q / (p.e0 + k_m + q)
        }
        ReducedModelKind::Extended => {
            let k_s = p.k_s();
            let w = x + k_s;
            -v * x * w / (p.e0 * k_s + w * w)
        }
        ReducedModelKind::Rqssa => p.k_cat * (p.s0 - x),
    }
}

/// Right-hand side of a reduced model; `x` is s or p depending on the kind.
pub fn reduced_rhs(kind: ReducedModelKind, x: f64, params: &RateParameters) -> Result<f64> {
    if !(0.0..=params.s0).contains(&x) {
        return Err(Error::Domain {
            what: match kind.variable() {
                ReducedVariable::Substrate => "s",
                ReducedVariable::Product => "p",
            },
            value: x,
            lo: 0.0,
            hi: params.s0,
        });
    }
    Ok(rhs_unchecked(kind, x, params))
}

/// (√2 − 1)s0, the effective initial substrate of the refuted extended form.
pub fn segel_initial_substrate(params: &RateParameters) -> f64 {
    (std::f64::consts::SQRT_2 - 1.0) * params.s0
}

/// Initial value each reduced model starts from at t = 0.
pub fn initial_value(kind: ReducedModelKind, params: &RateParameters) -> f64 {
    match kind {
        ReducedModelKind::SqssaS => params.s0,
        ReducedModelKind::EqssaSegel => segel_initial_substrate(params),
        ReducedModelKind::Extended => riccati_base_point(params).s_star,
        _ => 0.0,
    }
}

/// Full (s, c, p) view of a reduced state, with c slaved to the reduced variable.
pub fn reconstruct(kind: ReducedModelKind, x: f64, params: &RateParameters) -> MMState {
    let k_m = params.k_m();
    let (e0, s0) = (params.e0, params.s0);
    match kind {
        ReducedModelKind::SqssaS | ReducedModelKind::EqssaSegel => MMState {
            s: x,
            c: e0 * x / (k_m + x),
            p: s0 - x,
        },
        ReducedModelKind::Extended => {
            let c = e0 * x / (params.k_s() + x);
            MMState {
                s: x,
                c,
                p: s0 - x - c,
            }
        }
        ReducedModelKind::SqssaP => {
            let q = s0 - x;
            MMState {
                s: q,
                c: e0 * q / (k_m + q),
                p: x,
            }
        }
        ReducedModelKind::Tqssa => {
            let r = complex_roots(e0, k_m, s0 - x);
            MMState {
                s: r.q_gap,
                c: r.lower,
                p: x,
            }
        }
        ReducedModelKind::TqssaPractice => {
            let q = s0 - x;
            let c = e0 * q / (e0 + k_m + q);
            MMState { s: q - c, c, p: x }
        }
        ReducedModelKind::Rqssa => MMState {
            s: 0.0,
            c: s0 - x,
            p: x,
        },
    }
}

/// A reduced model as a scalar ODE.
#[derive(Debug, Clone, Copy)]
pub struct ReducedModel {
    pub kind: ReducedModelKind,
    pub params: RateParameters,
}

impl OdeSystem for ReducedModel {
    fn dim(&self) -> usize {
        1
    }

    fn rhs(&self, _t: f64, y: &[f64], dydt: &mut [f64]) {
        dydt[0] = rhs_unchecked(self.kind, y[0], &self.params);
    }
}

/// Integrate a reduced model from its canonical initial value.
pub fn simulate_reduced(
    kind: ReducedModelKind,
    params: &RateParameters,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    params.validate()?;
    let x0 = initial_value(kind, params);
    let sys = ReducedModel {
        kind,
        params: *params,
    };
    let mut tr = integrate(&sys, &[x0], (0.0, t_end), cfg)?;
    tr.meta.model = kind.name().to_string();
    tr.meta.params = Some(*params);
    tr.meta.notes.push(format!("initial_value={x0:.17e}"));
    if kind.historical_refuted() {
        tr.meta.notes.push("historical_refuted".to_string());
    }
    Ok(tr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    /// p(t) = s0(1 − e^(−k₂t))
    RqssaP,
    /// c(t) = ε_SS·s0·(1 − e^(−t/t_C))
    InnerLayer,
}

pub fn closed_form(kind: ClosedFormKind, t: f64, params: &RateParameters) -> f64 {
    match kind {
        ClosedFormKind::RqssaP => params.s0 * -(-params.k_cat * t).exp_m1(),
        ClosedFormKind::InnerLayer => {
            let eps_ss = params.e0 / (params.k_m() + params.s0);
            let t_c = timescales(params).t_c;
            eps_ss * params.s0 * -(-t / t_c).exp_m1()
        }
    }
}
