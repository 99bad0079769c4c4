use super::params::{complex_roots, RateParameters};
use crate::error::{Error, Result};

/// Nullclines in the (s, c) plane and the roots h∓(p) of the tQSSA quadratic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nullclines {
    e0: f64,
    s0: f64,
    k_m: f64,
    k_s: f64,
}

pub fn nullclines(params: &RateParameters) -> Nullclines {
    Nullclines {
        e0: params.e0,
        s0: params.s0,
        k_m: params.k_m(),
        k_s: params.k_s(),
    }
}

impl Nullclines {
    /// dc/dt = 0: c = e0·s/(K_M + s).
    pub fn c_nullcline(&self, s: f64) -> f64 {
        self.e0 * s / (self.k_m + s)
    }

    pub fn c_nullcline_ds(&self, s: f64) -> f64 {
        let d = self.k_m + s;
        self.e0 * self.k_m / (d * d)
    }

    /// ds/dt = 0: c = e0·s/(K_S + s).
    pub fn s_nullcline(&self, s: f64) -> f64 {
        self.e0 * s / (self.k_s + s)
    }

    pub fn s_nullcline_ds(&self, s: f64) -> f64 {
        let d = self.k_s + s;
        self.e0 * self.k_s / (d * d)
    }

    fn check_p(&self, p: f64) -> Result<()> {
        if (0.0..=self.s0).contains(&p) {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "p",
                value: p,
                lo: 0.0,
                hi: self.s0,
            })
        }
    }

    pub fn h_minus(&self, p: f64) -> Result<f64> {
        self.check_p(p)?;
        Ok(self.h_minus_unchecked(p))
    }

    pub fn h_plus(&self, p: f64) -> Result<f64> {
        self.check_p(p)?;
        Ok(complex_roots(self.e0, self.k_m, self.s0 - p).upper)
    }

    /// dh⁻/dp = −(e0 − h⁻)/√D(p).
    pub fn dh_minus_dp(&self, p: f64) -> Result<f64> {
        self.check_p(p)?;
        let r = complex_roots(self.e0, self.k_m, self.s0 - p);
        Ok(-r.e0_gap / r.sqrt_disc)
    }

    /// h⁻ without the domain check; slightly negative s0 − p continues the
    /// root smoothly, which keeps reduced integrations well defined.
    pub fn h_minus_unchecked(&self, p: f64) -> f64 {
        complex_roots(self.e0, self.k_m, self.s0 - p).lower
    }
}
