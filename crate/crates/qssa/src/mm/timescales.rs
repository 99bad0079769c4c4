use serde::Serialize;

use super::params::{complex_roots, RateParameters};

/// Characteristic times of one instance. Infinite entries stand for
/// timescales that do not exist (k₂ = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timescales {
    pub t_c: f64,
    pub t_d: f64,
    pub t_cstar: f64,
    /// Classical tQSSA slow scale 2s0/((e0+K_M+s0) − √(…)) = s0/λ.
    pub t_p: f64,
    pub t_ell: f64,
    pub t_slow: f64,
}

pub fn timescales(params: &RateParameters) -> Timescales {
    let k_m = params.k_m();
    let roots = complex_roots(params.e0, k_m, params.s0);
    let t_ell = if params.s0 <= params.e0 {
        0.0
    } else {
        (params.s0 - params.e0) / (params.k_cat * params.e0)
    };
    Timescales {
        t_c: 1.0 / (params.k1 * (params.s0 + k_m)),
        t_d: (k_m + params.s0) / params.v(),
        t_cstar: 1.0 / (params.k1 * roots.sqrt_disc),
        t_p: roots.upper / params.e0,
        t_ell,
        t_slow: 1.0 / params.k_cat,
    }
}

/// t_C* through the gaps e0 − λ and s0 − λ instead of the discriminant.
pub fn t_cstar_from_gaps(params: &RateParameters) -> f64 {
    let k_m = params.k_m();
    let r = complex_roots(params.e0, k_m, params.s0);
    1.0 / (params.k1 * (k_m + r.e0_gap + r.q_gap))
}

/// Rescalings of dimensional time used throughout the analysis.
///
/// | chart | definition |
/// |-------|-----------|
/// | τ     | t/t_C |
/// | T     | ε_SS·τ |
/// | T̄     | t/t_D |
/// | T̃     | k₂t |
/// | T_z   | t/t_P |
/// | τ*    | T̃/(ε*·ν) |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeChart {
    t_c: f64,
    t_d: f64,
    t_p: f64,
    k_cat: f64,
    eps_ss: f64,
    eps_star_nu: f64,
}

impl TimeChart {
    pub fn new(params: &RateParameters) -> Self {
        let ts = timescales(params);
        let k_m = params.k_m();
        let nu = params.k_cat / (params.k_off + params.k_cat);
        Self {
            t_c: ts.t_c,
            t_d: ts.t_d,
            t_p: ts.t_p,
            k_cat: params.k_cat,
            eps_ss: params.e0 / (k_m + params.s0),
            eps_star_nu: k_m / params.e0 * nu,
        }
    }

    pub fn tau(&self, t: f64) -> f64 {
        t / self.t_c
    }

    pub fn big_t(&self, t: f64) -> f64 {
        self.eps_ss * self.tau(t)
    }

    pub fn t_bar(&self, t: f64) -> f64 {
        t / self.t_d
    }

    pub fn t_tilde(&self, t: f64) -> f64 {
        self.k_cat * t
    }

    pub fn t_z(&self, t: f64) -> f64 {
        t / self.t_p
    }

    pub fn tau_star(&self, t: f64) -> f64 {
        self.t_tilde(t) / self.eps_star_nu
    }
}
