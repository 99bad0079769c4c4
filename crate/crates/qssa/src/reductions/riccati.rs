use serde::Serialize;

use crate::mm::RateParameters;

/// Base point of the zeroth-order fast fiber through (s0, 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiccatiBasePoint {
    /// Dimensionless pair, s̄ = s/s0 and c̄ = c/(ε_SS·s0).
    pub s_bar: f64,
    pub c_bar: f64,
    pub s_star: f64,
    pub c_star: f64,
    pub mu: f64,
    /// 1 − 2c̄ + μc̄², zero at the equilibrium.
    pub residual: f64,
}

/// Smaller root of 1 − 2c̄ + μc̄² = 0 on the fast fiber s̄ + c̄ = 1.
pub fn riccati_c_bar(mu: f64) -> f64 {
    if mu <= 1e-12 {
        0.5
    } else {
        // (2 − √(4(1−μ)))/(2μ), rationalized
        1.0 / (1.0 + (1.0 - mu).sqrt())
    }
}

pub fn riccati_base_point(params: &RateParameters) -> RiccatiBasePoint {
    let k_m = params.k_m();
    let mu = params.s0 / (k_m + params.s0);
    let eps_ss = params.e0 / (k_m + params.s0);
    let c_bar = riccati_c_bar(mu);
    let s_bar = 1.0 - c_bar;
    RiccatiBasePoint {
        s_bar,
        c_bar,
        s_star: s_bar * params.s0,
        c_star: c_bar * eps_ss * params.s0,
        mu,
        residual: 1.0 - 2.0 * c_bar + mu * c_bar * c_bar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_one_recovers_classical_estimate() {
        let p = RateParameters::new(1.0, 1.0, 0.01, 2.02, 1.01).unwrap();
        let b = riccati_base_point(&p);
        assert!((b.mu - 0.5).abs() < 1e-15);
        assert!((b.c_bar - (2.0 - std::f64::consts::SQRT_2)).abs() < 1e-15);
        assert!((b.s_bar - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-15);
        assert!(b.residual.abs() < 1e-15);
    }

    #[test]
    fn limits_and_oracle() {
        assert_eq!(riccati_c_bar(0.0), 0.5);
        assert_eq!(riccati_c_bar(1e-13), 0.5);
        // bisection oracle on 1 − 2c + 0.9c² over [0, 1]
        let f = |c: f64| 1.0 - 2.0 * c + 0.9 * c * c;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if f(m) > 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        let c = riccati_c_bar(0.9);
        assert!((c - 0.5 * (lo + hi)).abs() < 1e-14);
        assert!((c - 0.75975).abs() < 1e-5);
        assert!(f(c).abs() <= 1e-12);
    }

    #[test]
    fn equilibrium_across_mu() {
        for k in 1..=99 {
            let mu = k as f64 / 100.0;
            let c = riccati_c_bar(mu);
            assert!((1.0 - 2.0 * c + mu * c * c).abs() <= 1e-12);
        }
    }
}
