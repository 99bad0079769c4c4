use serde::{Deserialize, Serialize};

use super::envelope::Envelope;
use crate::error::{Error, Result};
use crate::mm::{complex_roots, derive_constants, RateParameters};

/// Constants of a fast/slow system ẋ = f, εẏ = g with g contractive in y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GronwallSpec {
    /// Contractivity: (g(x,y₁) − g(x,y₂))(y₁ − y₂) ≤ −ζ(y₁ − y₂)².
    pub zeta: f64,
    /// max |D_x h₀|
    pub sup_dh: f64,
    /// max |ẋ|
    pub sup_xdot: f64,
    pub eps: f64,
    /// |y(0) − h₀(x(0))|
    pub z0: f64,
}

impl GronwallSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.zeta > 0.0) || !(self.eps > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gronwall needs zeta > 0 and eps > 0, got zeta = {}, eps = {}",
                self.zeta, self.eps
            )));
        }
        Ok(())
    }
}

/// |z|(T) ≤ z0·e^(−ζT/2ε) + ε·sup_dh·sup_xdot/ζ, in the slow time T.
///
/// The Cauchy split uses δ = ζ/2ε, which is what halves the decay rate.
pub fn generic_gronwall(spec: &GronwallSpec) -> Envelope {
    let b = spec.eps * spec.sup_dh * spec.sup_xdot / spec.zeta;
    Envelope {
        kind: None,
        quantity: None,
        a: spec.z0,
        r: spec.zeta / (2.0 * spec.eps),
        b,
        range: f64::INFINITY,
        vacuous: false,
        eps_d: f64::NAN,
        eps_l: f64::NAN,
        eps_lt: f64::NAN,
        alt_offsets: Vec::new(),
    }
}

/// Constants that turn the generic envelope into the tQSSA nullcline one:
/// z = c − h⁻(p) in dimensional time, ζ = k1(e0 − λ + K_M),
/// |dh⁻/dp| ≤ e0/(K_M + e0), |ṗ| ≤ k₂λ and z(0) = −λ.
pub fn tqssa_gronwall_spec(params: &RateParameters) -> GronwallSpec {
    let lambda = derive_constants(params).lambda;
    let k_m = params.k_m();
    let gap = complex_roots(params.e0, k_m, params.s0).e0_gap;
    GronwallSpec {
        zeta: params.k1 * (gap + k_m),
        sup_dh: params.e0 / (k_m + params.e0),
        sup_xdot: params.k_cat * lambda,
        eps: 1.0,
        z0: lambda,
    }
}
