use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mm::RateParameters;
use crate::ode::{integrate, reference_config, MMState, MassAction};

/// Product progress curve p(t), measured or synthetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressCurve {
    pub times: Vec<f64>,
    pub p: Vec<f64>,
    pub e0: Option<f64>,
    pub s0: Option<f64>,
    pub noise_sd: f64,
    pub seed: Option<u64>,
}

impl ProgressCurve {
    pub fn new(times: Vec<f64>, p: Vec<f64>) -> Self {
        Self {
            times,
            p,
            e0: None,
            s0: None,
            noise_sd: 0.0,
            seed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.p.len() {
            return Err(Error::InvalidFitSpec(format!(
                "{} times but {} product values",
                self.times.len(),
                self.p.len()
            )));
        }
        if self.times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidFitSpec(
                "times must be finite and non-negative".into(),
            ));
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidFitSpec(
                "times must be strictly increasing".into(),
            ));
        }
        if self.p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFitSpec(
                "product values must be finite".into(),
            ));
        }
        Ok(())
    }

    /// max p − min p
    pub fn dynamic_range(&self) -> f64 {
        let lo = self.p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if self.p.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }
}

/// Reference mass-action p at `sample_times` plus i.i.d. N(0, noise_sd²) noise.
///
/// Noise is drawn in sample order from a ChaCha8 stream seeded with `seed`,
/// so equal inputs give bit-identical curves. No clamping to [0, s0].
pub fn synthesize(
    params: &RateParameters,
    sample_times: &[f64],
    noise_sd: f64,
    seed: u64,
) -> Result<ProgressCurve> {
    params.validate()?;
    if !(noise_sd >= 0.0) || !noise_sd.is_finite() {
        return Err(Error::InvalidParameter {
            name: "noise_sd",
            reason: format!("must be finite and >= 0, got {noise_sd}"),
        });
    }
    let probe = ProgressCurve::new(sample_times.to_vec(), vec![0.0; sample_times.len()]);
    probe.validate()?;

    let mut p = vec![0.0; sample_times.len()];
    if let Some(&t_end) = sample_times.last() {
        if t_end > 0.0 {
            let cfg = reference_config(params)
                .output_times(sample_times.to_vec())
                .dense(false);
            let sys = MassAction::new(*params);
            let tr = integrate(&sys, &MMState::initial(params).to_vec(), (0.0, t_end), &cfg)?;
            // the trajectory holds exactly the sample times (t = 0 only if requested)
            let offset = sample_times.len() - tr.len();
            for (k, state) in tr.states.iter().enumerate() {
                p[offset + k] = state[2];
            }
        }
    }

    if noise_sd > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise_sd).expect("finite sd");
        for v in p.iter_mut() {
            *v += normal.sample(&mut rng);
        }
    }

    Ok(ProgressCurve {
        times: sample_times.to_vec(),
        p,
        e0: Some(params.e0),
        s0: Some(params.s0),
        noise_sd,
        seed: Some(seed),
    })
}
