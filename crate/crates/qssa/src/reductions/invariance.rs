use serde::Serialize;

use crate::mm::{nullclines, timescales, RateParameters};

/// A candidate slow manifold c = h(s).
pub trait Manifold {
    fn value(&self, s: f64) -> f64;

    /// Analytic h′(s) if known; `None` falls back to centered differences.
    fn derivative(&self, _s: f64) -> Option<f64> {
        None
    }
}

pub struct FnManifold<F> {
    f: F,
}

impl<F: Fn(f64) -> f64> FnManifold<F> {
    pub fn new(f: F) -> Self {
        Self { f }
    }
}

impl<F: Fn(f64) -> f64> Manifold for FnManifold<F> {
    fn value(&self, s: f64) -> f64 {
        (self.f)(s)
    }
}

/// c = e0·s/(K_M + s)
pub struct CNullcline(pub RateParameters);

impl Manifold for CNullcline {
    fn value(&self, s: f64) -> f64 {
        nullclines(&self.0).c_nullcline(s)
    }

    fn derivative(&self, s: f64) -> Option<f64> {
        Some(nullclines(&self.0).c_nullcline_ds(s))
    }
}

/// c = e0·s/(K_S + s)
pub struct SNullcline(pub RateParameters);

impl Manifold for SNullcline {
    fn value(&self, s: f64) -> f64 {
        nullclines(&self.0).s_nullcline(s)
    }

    fn derivative(&self, s: f64) -> Option<f64> {
        Some(nullclines(&self.0).s_nullcline_ds(s))
    }
}

fn f_s(p: &RateParameters, s: f64, c: f64) -> f64 {
    -p.k1 * (p.e0 - c) * s + p.k_off * c
}

fn g_c(p: &RateParameters, s: f64, c: f64) -> f64 {
    p.k1 * (p.e0 - c) * s - (p.k_off + p.k_cat) * c
}

fn centered(h: &dyn Manifold, s: f64) -> f64 {
    let d = f64::EPSILON.cbrt() * s.abs().max(1e-12);
    (h.value(s + d) - h.value(s - d)) / (2.0 * d)
}

/// R(s) = g(s, h(s)) − h′(s)·f(s, h(s)) at each grid point (dimensional).
pub fn invariance_residual(h: &dyn Manifold, params: &RateParameters, s_grid: &[f64]) -> Vec<f64> {
    s_grid
        .iter()
        .map(|&s| {
            let c = h.value(s);
            let dh = h.derivative(s).unwrap_or_else(|| centered(h, s));
            g_c(params, s, c) - dh * f_s(params, s, c)
        })
        .collect()
}

/// Factor t_C/(ε_SS·s0) taking a dimensional residual to the (τ, s̄, c̄) chart
/// with s̄ = s/s0, c̄ = c/(ε_SS·s0), τ = t/t_C.
pub fn residual_scale(params: &RateParameters) -> f64 {
    let eps_ss = params.e0 / (params.k_m() + params.s0);
    timescales(params).t_c / (eps_ss * params.s0)
}

pub fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Second-order derivative of grid samples: three-point centered formula in
/// the interior, three-point one-sided at the ends. Works on uneven grids.
pub fn grid_derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    if n == 2 {
        let d = (y[1] - y[0]) / (x[1] - x[0]);
        return vec![d, d];
    }
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h1 = x[i] - x[i - 1];
        let h2 = x[i + 1] - x[i];
        d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1]
            + (h2 - h1) / (h1 * h2) * y[i]
            + h1 / (h2 * (h1 + h2)) * y[i + 1];
    }
    let (h1, h2) = (x[1] - x[0], x[2] - x[1]);
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1]
        - h1 / (h2 * (h1 + h2)) * y[2];
    let (h1, h2) = (x[n - 2] - x[n - 3], x[n - 1] - x[n - 2]);
    d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2]
        + (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
    d
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refinement {
    pub s_grid: Vec<f64>,
    /// Last computed iterate on the grid.
    pub h: Vec<f64>,
    /// sup |R| of h₀, h₁, … (grid derivatives throughout).
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    pub diverged: bool,
}

fn grid_residual(p: &RateParameters, s: &[f64], h: &[f64]) -> f64 {
    let dh = grid_derivative(s, h);
    let r: Vec<f64> = (0..s.len())
        .map(|i| g_c(p, s[i], h[i]) - dh[i] * f_s(p, s[i], h[i]))
        .collect();
    sup_abs(&r)
}

/// Functional iteration h_{n+1}(s) = (k1·e0·s − h_n′(s)·f(s, h_n(s)))/(k1(s + K_M)).
///
/// Stops early, with `diverged` set, when the sup-residual grows on two
/// consecutive iterations. Partial results are returned either way.
pub fn refine_manifold(
    h0: &dyn Manifold,
    params: &RateParameters,
    n_iter: usize,
    s_grid: &[f64],
) -> Refinement {
    let k_m = params.k_m();
    let mut h: Vec<f64> = s_grid.iter().map(|&s| h0.value(s)).collect();
    let mut history = vec![grid_residual(params, s_grid, &h)];
    let mut diverged = false;
    let mut iterations = 0;
    for _ in 0..n_iter {
        let dh = grid_derivative(s_grid, &h);
        let next: Vec<f64> = (0..s_grid.len())
            .map(|i| {
                let s = s_grid[i];
                (params.k1 * params.e0 * s - dh[i] * f_s(params, s, h[i])) / (params.k1 * (s + k_m))
            })
            .collect();
        h = next;
        iterations += 1;
        history.push(grid_residual(params, s_grid, &h));
        let k = history.len();
        if k >= 3 && history[k - 1] > history[k - 2] && history[k - 2] > history[k - 3] {
            diverged = true;
            break;
        }
        if !history[k - 1].is_finite() {
            diverged = true;
            break;
        }
    }
    Refinement {
        s_grid: s_grid.to_vec(),
        h,
        residual_history: history,
        iterations,
        diverged,
    }
}
