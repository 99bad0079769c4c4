use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    /// Start explicit, switch to implicit once stiffness is detected.
    Auto,
    /// Dormand–Prince 5(4).
    ExplicitAdaptive,
    /// L-stable SDIRK of order 4 with embedded order 3.
    ImplicitAdaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub method: Method,
    pub max_step: f64,
    /// Keep every accepted step. When `output_times` is set and this is
    /// false, only the requested times are stored.
    pub dense_output: bool,
    /// Sample times; steps are shortened to land on each one exactly.
    pub output_times: Option<Vec<f64>>,
    pub max_steps: usize,
    pub initial_step: Option<f64>,
    /// Reject steps that push a component below −atol. On for concentrations;
    /// switch it off for systems whose states may change sign.
    pub nonnegative: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            method: Method::Auto,
            max_step: f64::INFINITY,
            dense_output: true,
            output_times: None,
            max_steps: 2_000_000,
            initial_step: None,
            nonnegative: true,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    pub fn method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn output_times(mut self, times: Vec<f64>) -> Self {
        self.output_times = Some(times);
        self
    }

    pub fn nonnegative(mut self, on: bool) -> Self {
        self.nonnegative = on;
        self
    }

    pub fn dense(mut self, dense: bool) -> Self {
        self.dense_output = dense;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rtol = {} must be > 0",
                self.rtol
            )));
        }
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "atol = {} must be > 0",
                self.atol
            )));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::InvalidConfig("max_step must be > 0".into()));
        }
        if let Some(ts) = &self.output_times {
            if ts.iter().any(|t| !t.is_finite()) || ts.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidConfig(
                    "output times must be finite and strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}
