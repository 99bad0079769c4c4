use serde::Serialize;

use super::config::Method;
use crate::mm::RateParameters;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    /// Free-form model label, e.g. "mass_action" or "TQSSA".
    pub model: String,
    pub params: Option<RateParameters>,
    pub rtol: f64,
    pub atol: f64,
    pub method_requested: Method,
    /// Method in use when integration finished.
    pub method_used: Method,
    /// Time at which AUTO handed over to the implicit scheme.
    pub switched_at: Option<f64>,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub rhs_evals: usize,
    pub jacobian_evals: usize,
    /// Sum over accepted steps of the max-norm of the embedded error estimate.
    pub local_error_sum: f64,
    pub notes: Vec<String>,
}

impl TrajectoryMeta {
    pub(crate) fn new(rtol: f64, atol: f64, method: Method) -> Self {
        Self {
            model: String::new(),
            params: None,
            rtol,
            atol,
            method_requested: method,
            method_used: method,
            switched_at: None,
            steps_accepted: 0,
            steps_rejected: 0,
            rhs_evals: 0,
            jacobian_evals: 0,
            local_error_sum: 0.0,
            notes: Vec::new(),
        }
    }
}

/// Time-ordered states with their time derivatives (for Hermite dense output).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub derivatives: Vec<Vec<f64>>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn component(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|y| y[i]).collect()
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn t_end(&self) -> f64 {
        self.times.last().copied().unwrap_or(f64::NAN)
    }

    fn bracket(&self, t: f64) -> usize {
        // index i with times[i] <= t <= times[i+1], clamped to the ends
        let n = self.times.len();
        match self.times.partition_point(|&x| x <= t) {
            0 => 0,
            k if k >= n => n.saturating_sub(2),
            k => k - 1,
        }
    }

    /// Cubic Hermite interpolation of the state at `t` (clamped to the span).
    pub fn interpolate(&self, t: f64) -> Vec<f64> {
        if self.times.len() == 1 {
            return self.states[0].clone();
        }
        let i = self.bracket(t);
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let x = ((t - t0) / h).clamp(0.0, 1.0);
        let h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
        let h10 = x * (1.0 - x) * (1.0 - x);
        let h01 = x * x * (3.0 - 2.0 * x);
        let h11 = x * x * (x - 1.0);
        let (y0, y1) = (&self.states[i], &self.states[i + 1]);
        let (f0, f1) = (&self.derivatives[i], &self.derivatives[i + 1]);
        (0..y0.len())
            .map(|k| h00 * y0[k] + h10 * h * f0[k] + h01 * y1[k] + h11 * h * f1[k])
            .collect()
    }

    /// Time derivative of the Hermite interpolant.
    pub fn interpolate_derivative(&self, t: f64) -> Vec<f64> {
        if self.times.len() == 1 {
            return self.derivatives[0].clone();
        }
        let i = self.bracket(t);
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let x = ((t - t0) / h).clamp(0.0, 1.0);
        let d00 = 6.0 * x * (x - 1.0) / h;
        let d10 = (1.0 - x) * (1.0 - 3.0 * x);
        let d01 = -d00;
        let d11 = x * (3.0 * x - 2.0);
        let (y0, y1) = (&self.states[i], &self.states[i + 1]);
        let (f0, f1) = (&self.derivatives[i], &self.derivatives[i + 1]);
        (0..y0.len())
            .map(|k| d00 * y0[k] + d10 * f0[k] + d01 * y1[k] + d11 * f1[k])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |t: f64| t * t * t - 2.0 * t + 1.0;
        let df = |t: f64| 3.0 * t * t - 2.0;
        let times = vec![0.0, 0.7, 2.0];
        let tr = Trajectory {
            states: times.iter().map(|&t| vec![f(t)]).collect(),
            derivatives: times.iter().map(|&t| vec![df(t)]).collect(),
            times,
            meta: TrajectoryMeta::new(1e-8, 1e-10, Method::Auto),
        };
        for &t in &[0.1, 0.5, 1.3, 1.99] {
            assert!((tr.interpolate(t)[0] - f(t)).abs() < 1e-12);
            assert!((tr.interpolate_derivative(t)[0] - df(t)).abs() < 1e-12);
        }
        assert_eq!(tr.interpolate(0.7)[0], f(0.7));
    }
}
