use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five dimensional inputs of one reaction instance.
///
/// `k_off` is the dissociation rate k₋₁ and `k_cat` the catalytic rate k₂.
/// All concentrations and times are in one (caller-chosen) unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParameters {
    pub k1: f64,
    pub k_off: f64,
    pub k_cat: f64,
    pub e0: f64,
    pub s0: f64,
}

impl RateParameters {
    pub fn new(k1: f64, k_off: f64, k_cat: f64, e0: f64, s0: f64) -> Result<Self> {
        let p = Self {
            k1,
            k_off,
            k_cat,
            e0,
            s0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, v: f64, strict: bool| -> Result<()> {
            let ok = v.is_finite() && if strict { v > 0.0 } else { v >= 0.0 };
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!(
                        "{v} must be finite and {}",
                        if strict { "> 0" } else { ">= 0" }
                    ),
                })
            }
        };
        check("k1", self.k1, true)?;
        check("k_off", self.k_off, false)?;
        check("k_cat", self.k_cat, false)?;
        check("e0", self.e0, true)?;
        check("s0", self.s0, true)
    }

    /// Michaelis constant (k₋₁ + k₂)/k₁.
    pub fn k_m(&self) -> f64 {
        (self.k_off + self.k_cat) / self.k1
    }

    /// Dissociation constant k₋₁/k₁.
    pub fn k_s(&self) -> f64 {
        self.k_off / self.k1
    }

    /// Limiting rate k₂e₀.
    pub fn v(&self) -> f64 {
        self.k_cat * self.e0
    }

    /// Same instance with a different initial enzyme concentration.
    pub fn with_e0(&self, e0: f64) -> Self {
        Self { e0, ..*self }
    }

    pub fn with_s0(&self, s0: f64) -> Self {
        Self { s0, ..*self }
    }
}

/// Constants derived once per instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub k_m: f64,
    pub k_s: f64,
    pub v: f64,
    /// Supremum of c along the reaction from (s0, 0, 0): the smaller root h⁻(0).
    pub lambda: f64,
}

pub fn derive_constants(params: &RateParameters) -> DerivedConstants {
    let k_m = params.k_m();
    DerivedConstants {
        k_m,
        k_s: params.k_s(),
        v: params.v(),
        lambda: complex_roots(params.e0, k_m, params.s0).lower,
    }
}

/// Both roots of c² − (e0 + K_M + q)c + e0·q = 0 together with the gaps
/// e0 − lower and q − lower, all evaluated without cancellation.
///
/// With q = s0 − p this is the tQSSA quadratic; q = s0 gives λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRoots {
    pub lower: f64,
    pub upper: f64,
    /// √((e0+K_M+q)² − 4e0q), written as √((e0−q)² + K_M(K_M+2e0+2q)).
    pub sqrt_disc: f64,
    pub e0_gap: f64,
    pub q_gap: f64,
}

pub fn complex_roots(e0: f64, k_m: f64, q: f64) -> ComplexRoots {
    if k_m == 0.0 {
        let lower = e0.min(q);
        return ComplexRoots {
            lower,
            upper: e0.max(q),
            sqrt_disc: (e0 - q).abs(),
            e0_gap: e0 - lower,
            q_gap: q - lower,
        };
    }
    let a = e0 + k_m + q;
    let d = (e0 - q) * (e0 - q) + k_m * (k_m + 2.0 * e0 + 2.0 * q);
    let sd = d.max(0.0).sqrt();
    let denom = a + sd;
    let lower = 2.0 * e0 * q / denom;
    // (e0 − λ)(q − λ) = λ·K_M lets the smaller gap come from the larger one.
    let (e0_gap, q_gap) = if e0 >= q {
        let g = e0 * (e0 - q + k_m + sd) / denom;
        (g, lower * k_m / g)
    } else {
        let g = q * (q - e0 + k_m + sd) / denom;
        (lower * k_m / g, g)
    };
    ComplexRoots {
        lower,
        upper: denom / 2.0,
        sqrt_disc: sd,
        e0_gap,
        q_gap,
    }
}
