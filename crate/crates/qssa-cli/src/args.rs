use std::path::PathBuf;

use clap::Args;
use qssa::ode::{reference_config, IntegratorConfig};
use qssa::presets::{preset, PRESET_NAMES};
use qssa::RateParameters;

use crate::error::{CliError, CliResult};
use crate::output::Format;

/// Reaction parameters. A preset fills in everything; explicit flags win.
/// K_M and κ = k_off/k_cat may replace k_off and k_cat.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Parameter set of a reference figure
    #[arg(long, value_parser = PRESET_NAMES)]
    pub preset: Option<String>,
    #[arg(long)]
    pub k1: Option<f64>,
    /// Dissociation rate k₋₁
    #[arg(long)]
    pub koff: Option<f64>,
    /// Catalytic rate k₂
    #[arg(long)]
    pub kcat: Option<f64>,
    #[arg(long)]
    pub e0: Option<f64>,
    #[arg(long)]
    pub s0: Option<f64>,
    /// Michaelis constant; needs --kappa unless --koff and --kcat fix the ratio
    #[arg(long)]
    pub km: Option<f64>,
    /// k_off/k_cat, used with --km
    #[arg(long)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub atol: Option<f64>,
    /// Write all outputs into DIR instead of printing the primary one
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Parameter values before resolution; sweeps overwrite single fields.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamSpec {
    pub k1: Option<f64>,
    pub k_off: Option<f64>,
    pub k_cat: Option<f64>,
    pub e0: Option<f64>,
    pub s0: Option<f64>,
    pub k_m: Option<f64>,
    pub kappa: Option<f64>,
}

impl ParamArgs {
    pub fn spec(&self) -> CliResult<ParamSpec> {
        let mut spec = ParamSpec::default();
        if let Some(name) = &self.preset {
            let p = preset(name)
                .ok_or_else(|| CliError::Usage(format!("unknown preset '{name}'")))?
                .params;
            spec.k1 = Some(p.k1);
            spec.k_off = Some(p.k_off);
            spec.k_cat = Some(p.k_cat);
            spec.e0 = Some(p.e0);
            spec.s0 = Some(p.s0);
        }
        let over = |dst: &mut Option<f64>, src: Option<f64>| {
            if src.is_some() {
                *dst = src;
            }
        };
        over(&mut spec.k1, self.k1);
        over(&mut spec.k_off, self.koff);
        over(&mut spec.k_cat, self.kcat);
        over(&mut spec.e0, self.e0);
        over(&mut spec.s0, self.s0);
        over(&mut spec.k_m, self.km);
        over(&mut spec.kappa, self.kappa);
        Ok(spec)
    }

    pub fn resolve(&self) -> CliResult<RateParameters> {
        self.spec()?.resolve()
    }
}

impl ParamSpec {
    pub fn set(&mut self, name: &str, value: f64) -> CliResult<()> {
        let slot = match name {
            "k1" => &mut self.k1,
            "koff" | "k_off" => &mut self.k_off,
            "kcat" | "k_cat" => &mut self.k_cat,
            "e0" => &mut self.e0,
            "s0" => &mut self.s0,
            "km" | "k_m" => &mut self.k_m,
            "kappa" => &mut self.kappa,
            _ => return Err(CliError::Usage(format!("unknown parameter '{name}'"))),
        };
        *slot = Some(value);
        Ok(())
    }

    pub fn resolve(&self) -> CliResult<RateParameters> {
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| CliError::Usage(format!("missing --{flag} (or --preset)")))
        };
        let k1 = need(self.k1, "k1")?;
        let (k_off, k_cat) = match self.k_m {
            Some(k_m) => {
                let kappa = match (self.kappa, self.k_off, self.k_cat) {
                    (Some(kappa), _, _) => kappa,
                    (None, Some(a), Some(b)) if b > 0.0 => a / b,
                    _ => return Err(CliError::Usage("--km needs --kappa".into())),
                };
                let total = k_m * k1;
                (total * kappa / (1.0 + kappa), total / (1.0 + kappa))
            }
            None => (need(self.k_off, "koff")?, need(self.k_cat, "kcat")?),
        };
        let e0 = need(self.e0, "e0")?;
        let s0 = need(self.s0, "s0")?;
        Ok(RateParameters::new(k1, k_off, k_cat, e0, s0)?)
    }
}

impl RunArgs {
    /// Reference tolerances unless overridden.
    pub fn config(&self, params: &RateParameters) -> IntegratorConfig {
        let mut cfg = reference_config(params);
        if let Some(r) = self.rtol {
            cfg.rtol = r;
        }
        if let Some(a) = self.atol {
            cfg.atol = a;
        }
        cfg
    }

    pub fn t_end_or(&self, default: f64) -> CliResult<f64> {
        let t = self.t_end.unwrap_or(default);
        if t > 0.0 && t.is_finite() {
            Ok(t)
        } else {
            Err(CliError::Usage(format!(
                "--t-end must be finite and > 0, got {t}"
            )))
        }
    }
}
