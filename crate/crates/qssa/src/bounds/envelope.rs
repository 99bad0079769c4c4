use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mm::{complex_roots, dimensionless_groups, RateParameters};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundKind {
    SubstrateConservation,
    SqssaEnslavement,
    RqssaDissipation,
    TqssaNullcline,
    TqssaLimsupTight,
    TqssaPractice,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        Self::SubstrateConservation,
        Self::SqssaEnslavement,
        Self::RqssaDissipation,
        Self::TqssaNullcline,
        Self::TqssaLimsupTight,
        Self::TqssaPractice,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::SubstrateConservation => "SUBSTRATE_CONSERVATION",
            Self::SqssaEnslavement => "SQSSA_ENSLAVEMENT",
            Self::RqssaDissipation => "RQSSA_DISSIPATION",
            Self::TqssaNullcline => "TQSSA_NULLCLINE",
            Self::TqssaLimsupTight => "TQSSA_LIMSUP_TIGHT",
            Self::TqssaPractice => "TQSSA_PRACTICE",
        }
    }

    pub fn quantity(&self) -> Quantity {
        match self {
            Self::SubstrateConservation => Quantity::ComplexMass,
            Self::SqssaEnslavement => Quantity::SqssaSlaving,
            Self::RqssaDissipation => Quantity::Substrate,
            Self::TqssaNullcline | Self::TqssaLimsupTight => Quantity::TqssaSlaving,
            Self::TqssaPractice => Quantity::TqssaPracticeSlaving,
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| format!("unknown bound kind '{s}'"))
    }
}

/// The function of the mass-action state an envelope bounds in absolute value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// s0 − s − p
    ComplexMass,
    /// c/e0 − (s0 − p)/(K_M + s0 − p)
    SqssaSlaving,
    /// s
    Substrate,
    /// c − h⁻(p)
    TqssaSlaving,
    /// c − e0(s0 − p)/(e0 + K_M + s0 − p)
    TqssaPracticeSlaving,
}

impl Quantity {
    pub fn formula(&self) -> &'static str {
        match self {
            Self::ComplexMass => "s0 - s - p",
            Self::SqssaSlaving => "c/e0 - (s0 - p)/(K_M + s0 - p)",
            Self::Substrate => "s",
            Self::TqssaSlaving => "c - h_minus(p)",
            Self::TqssaPracticeSlaving => "c - e0*(s0 - p)/(e0 + K_M + s0 - p)",
        }
    }

    /// Number of leading (s, c, p) components the quantity reads.
    pub fn components_needed(&self) -> usize {
        match self {
            Self::Substrate => 1,
            _ => 3,
        }
    }

    /// Signed value at state (s, c, p); trailing components may be absent
    /// when not needed.
    ///
    /// s0 − p is evaluated as s + c, equal under conservation, because the
    /// direct difference loses every digit once p is close to s0.
    pub fn eval(&self, state: &[f64], params: &RateParameters) -> f64 {
        let (e0, k_m) = (params.e0, params.k_m());
        match self {
            Self::Substrate => state[0],
            Self::ComplexMass => params.s0 - state[0] - state[2],
            Self::SqssaSlaving => {
                let q = state[0] + state[1];
                state[1] / e0 - q / (k_m + q)
            }
            Self::TqssaSlaving => {
                let q = (state[0] + state[1]).max(0.0);
                state[1] - complex_roots(e0, k_m, q).lower
            }
            Self::TqssaPracticeSlaving => {
                let q = state[0] + state[1];
                state[1] - e0 * q / (e0 + k_m + q)
            }
        }
    }
}

impl Quantity {
    /// Sum of the magnitudes of the terms that cancel inside the quantity.
    /// Integration errors in the state reach the quantity at this scale.
    pub fn cancellation_scale(&self, state: &[f64], params: &RateParameters) -> f64 {
        let (e0, k_m) = (params.e0, params.k_m());
        match self {
            Self::Substrate => state[0].abs(),
            Self::ComplexMass => params.s0 + state[0].abs() + state[2].abs(),
            Self::SqssaSlaving => {
                let q = state[0] + state[1];
                (state[1] / e0).abs() + (q / (k_m + q)).abs()
            }
            Self::TqssaSlaving => {
                let q = (state[0] + state[1]).max(0.0);
                state[1].abs() + complex_roots(e0, k_m, q).lower.abs()
            }
            Self::TqssaPracticeSlaving => {
                let q = state[0] + state[1];
                state[1].abs() + (e0 * q / (e0 + k_m + q)).abs()
            }
        }
    }
}

/// A·e^(−r·t) + B in dimensional time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub kind: Option<BoundKind>,
    pub quantity: Option<Quantity>,
    pub a: f64,
    pub r: f64,
    pub b: f64,
    /// Largest value |quantity| can take a priori.
    pub range: f64,
    /// Set when B alone already exceeds `range`.
    pub vacuous: bool,
    pub eps_d: f64,
    pub eps_l: f64,
    pub eps_lt: f64,
    /// Case-split offsets reported next to B (name, value).
    pub alt_offsets: Vec<(String, f64)>,
}

impl Envelope {
    pub fn value(&self, t: f64) -> f64 {
        if self.a == 0.0 {
            self.b
        } else {
            self.a * (-self.r * t).exp() + self.b
        }
    }

    /// B/λ, the normalized long-time offset.
    pub fn offset_over_lambda(&self, params: &RateParameters) -> f64 {
        self.b / complex_roots(params.e0, params.k_m(), params.s0).lower
    }

    /// Exponent rate measured in T_z = k₂λt/s0 units, equal to 1/(2ε_D) for
    /// the nullcline envelope.
    pub fn rate_in_tz_units(&self, params: &RateParameters) -> f64 {
        let lambda = complex_roots(params.e0, params.k_m(), params.s0).lower;
        self.r * params.s0 / (params.k_cat * lambda)
    }
}

fn degenerate(kind: BoundKind, divisor: &'static str) -> Error {
    Error::DegenerateBound {
        kind: kind.name(),
        divisor,
    }
}

/// Energy-method envelope of `kind` for the standard initial condition (s0, 0, 0).
pub fn envelope(kind: BoundKind, params: &RateParameters) -> Result<Envelope> {
    params.validate()?;
    let (k1, e0, s0) = (params.k1, params.e0, params.s0);
    let k_m = params.k_m();
    let g = dimensionless_groups(params);
    let roots = complex_roots(e0, k_m, s0);
    let lambda = roots.lower;
    let gap = roots.e0_gap;
    let mut alt_offsets = Vec::new();

    let (a, r, b, range) = match kind {
        BoundKind::SubstrateConservation => {
            if k_m == 0.0 {
                return Err(degenerate(kind, "K_M"));
            }
            (0.0, k1 * k_m / 2.0, s0 * g.eta, s0)
        }
        BoundKind::SqssaEnslavement => {
            if k_m == 0.0 {
                return Err(degenerate(kind, "K_M"));
            }
            alt_offsets.push(("s0_below_e0".to_string(), g.eta / 4.0 + g.nu * g.sigma));
            alt_offsets.push(("e0_below_s0".to_string(), 1.25 * g.eta));
            (g.mu, k1 * k_m / 2.0, g.eta / 4.0 + g.nu * lambda / k_m, 1.0)
        }
        BoundKind::RqssaDissipation => {
            if gap <= 0.0 {
                return Err(degenerate(kind, "e0 - lambda"));
            }
            (s0, k1 * gap / 2.0, params.k_s() * lambda / gap, s0)
        }
        BoundKind::TqssaNullcline => {
            let zeta = k1 * (gap + k_m);
            if zeta <= 0.0 {
                return Err(degenerate(kind, "e0 - lambda + K_M"));
            }
            let b = e0 * params.k_cat * lambda / ((k_m + e0) * zeta);
            (lambda, zeta / 2.0, b, lambda)
        }
        BoundKind::TqssaLimsupTight => {
            let theta = theta_at(params, lambda);
            (lambda, k1 * theta.abs() / 2.0, lambda * g.eps_lt, lambda)
        }
        BoundKind::TqssaPractice => {
            let sum = k_m + e0;
            let a = e0 * s0 / (e0 + k_m + s0);
            let b = lambda * (lambda / sum + g.nu * e0 * k_m / (sum * sum));
            (a, k1 * sum / 2.0, b, lambda.max(a))
        }
    };

    Ok(Envelope {
        kind: Some(kind),
        quantity: Some(kind.quantity()),
        a,
        r,
        b,
        range,
        vacuous: b > range,
        eps_d: g.eps_d,
        eps_l: g.eps_l,
        eps_lt: g.eps_lt,
        alt_offsets,
    })
}

/// θ(c) = c − h⁺ evaluated where p = s0 − c, i.e. the upper root with q = c.
pub fn theta_at(params: &RateParameters, c: f64) -> f64 {
    c - complex_roots(params.e0, params.k_m(), c).upper
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_final() -> RateParameters {
        RateParameters::new(20.0, 10.0, 10.0, 10.0, 1000.0).unwrap()
    }

    fn rqssa_instance() -> RateParameters {
        RateParameters::new(1.0, 0.005, 0.005, 100.0, 100.0).unwrap()
    }

    #[test]
    fn nullcline_envelope_on_fig_final() {
        let p = fig_final();
        let env = envelope(BoundKind::TqssaNullcline, &p).unwrap();
        assert!((env.r - 10.101).abs() < 1e-3, "r = {}", env.r);
        assert!((env.b - 4.4955).abs() < 1e-3, "B = {}", env.b);
        assert!((env.offset_over_lambda(&p) - env.eps_l).abs() < 1e-12);
        assert!((env.eps_l - 0.450).abs() < 1e-3);
        assert!(!env.vacuous);
    }

    #[test]
    fn decay_rate_matches_eps_d() {
        let p = fig_final();
        let env = envelope(BoundKind::TqssaNullcline, &p).unwrap();
        let want = 1.0 / (2.0 * env.eps_d);
        assert!((env.rate_in_tz_units(&p) - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn rqssa_offset() {
        let env = envelope(BoundKind::RqssaDissipation, &rqssa_instance()).unwrap();
        assert!((env.b - 0.4975).abs() < 1e-4, "B = {}", env.b);
        assert_eq!(env.a, 100.0);
    }

    #[test]
    fn conservation_envelope_is_vacuous_at_large_eta() {
        let env = envelope(BoundKind::SubstrateConservation, &fig_final()).unwrap();
        assert!((env.b - 10_000.0).abs() < 1e-9);
        assert!(env.vacuous);
    }

    #[test]
    fn theta_at_e0_closed_form() {
        let p = fig_final();
        let k_m = p.k_m();
        let want = -0.5 * (k_m + (k_m * k_m + 4.0 * p.e0 * k_m).sqrt());
        assert!((theta_at(&p, p.e0) - want).abs() < 1e-12);
        // θ increases, so θ(λ) ≤ θ(e0)
        let lambda = crate::mm::derive_constants(&p).lambda;
        assert!(theta_at(&p, lambda) <= theta_at(&p, p.e0));
    }

    #[test]
    fn tight_offset_below_nullcline_offset_when_substrate_dominates() {
        let p = fig_final();
        let tight = envelope(BoundKind::TqssaLimsupTight, &p).unwrap();
        let loose = envelope(BoundKind::TqssaNullcline, &p).unwrap();
        assert!(tight.b <= loose.b);
        assert!((tight.b / tight.a - 0.1228).abs() < 1e-4);
    }

    #[test]
    fn degenerate_divisors() {
        let p = RateParameters::new(1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            envelope(BoundKind::SqssaEnslavement, &p),
            Err(Error::DegenerateBound { .. })
        ));
        assert!(matches!(
            envelope(BoundKind::SubstrateConservation, &p),
            Err(Error::DegenerateBound { .. })
        ));
        // s0 = e0 with K_M = 0 puts λ at e0
        assert!(matches!(
            envelope(BoundKind::RqssaDissipation, &p),
            Err(Error::DegenerateBound { .. })
        ));
    }

    #[test]
    fn quantity_values_at_initial_state() {
        let p = fig_final();
        let x0 = [p.s0, 0.0, 0.0];
        let lambda = crate::mm::derive_constants(&p).lambda;
        for kind in BoundKind::ALL {
            let env = envelope(kind, &p).unwrap();
            let q = kind.quantity().eval(&x0, &p).abs();
            assert!(q <= env.value(0.0) * (1.0 + 1e-12), "{kind}");
        }
        assert!((Quantity::TqssaSlaving.eval(&x0, &p) + lambda).abs() < 1e-12);
        assert_eq!(
            "tqssa-practice".parse::<BoundKind>(),
            Ok(BoundKind::TqssaPractice)
        );
    }
}
