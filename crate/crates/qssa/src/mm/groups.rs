use serde::Serialize;

use super::params::{complex_roots, RateParameters};

/// Which limits an instance sits in. Degenerate instances still produce
/// groups; the affected fields are ±∞, 0 or NaN as documented per field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Degeneracy {
    /// K_M = 0: η, σ are +∞ and ε̲, ε̃ take their K_M → 0 limits.
    pub k_m_zero: bool,
    /// k₂ = 0: κ = +∞, ν = 0, t_slow and t_D are +∞.
    pub k_cat_zero: bool,
    /// k₋₁ = 0: ν̃ = +∞, κ = 0.
    pub k_off_zero: bool,
}

impl Degeneracy {
    pub fn any(&self) -> bool {
        self.k_m_zero || self.k_cat_zero || self.k_off_zero
    }
}

/// Small parameters and scaling groups of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionlessGroups {
    pub eps_ss: f64,
    pub eta: f64,
    pub eps_star: f64,
    pub eps_sm: f64,
    pub sigma: f64,
    pub kappa: f64,
    pub nu: f64,
    pub nu_tilde: f64,
    pub beta: f64,
    pub mu: f64,
    pub alpha: f64,
    pub ell: f64,
    pub eps_ratio: f64,
    pub eps_under: f64,
    pub eps_tilde: f64,
    pub eps_t: f64,
    /// t_C*·k₂/t_P: the same ratio with the slow timescale s0/(k₂λ) carrying
    /// its rate constant. Informational; `eps_t` keeps the classical form.
    pub eps_t_kinetic: f64,
    pub eps_d: f64,
    pub eps_l: f64,
    pub eps_lt: f64,
    pub theta_ext: f64,
    pub degeneracy: Degeneracy,
}

pub fn dimensionless_groups(params: &RateParameters) -> DimensionlessGroups {
    let RateParameters {
        k1,
        k_off,
        k_cat,
        e0,
        s0,
    } = *params;
    let k_m = params.k_m();
    let k_s = params.k_s();
    let roots = complex_roots(e0, k_m, s0);
    let lambda = roots.lower;

    let degeneracy = Degeneracy {
        k_m_zero: k_m == 0.0,
        k_cat_zero: k_cat == 0.0,
        k_off_zero: k_off == 0.0,
    };

    let eta = e0 / k_m;
    let eps_star = k_m / e0;
    let sigma = s0 / k_m;
    let kappa = k_off / k_cat;
    let rate_sum = k_off + k_cat;
    let nu = k_cat / rate_sum;
    let alpha = k_off / rate_sum;
    let beta = k_m / (k_m + s0);
    let mu = s0 / (k_m + s0);

    let eps_under = if degeneracy.k_m_zero {
        if s0 > e0 {
            (s0 - e0) / e0
        } else {
            0.0
        }
    } else {
        k_m / roots.e0_gap
    };
    let eps_tilde = if degeneracy.k_m_zero {
        alpha * eps_under
    } else {
        k_s / roots.e0_gap
    };

    let t_c = 1.0 / (k1 * (s0 + k_m));
    let t_d = (k_m + s0) / (k_cat * e0);
    let t_c_star = 1.0 / (k1 * roots.sqrt_disc);
    let t_p = roots.upper / e0;

    let sat = e0 / (k_m + e0);
    let under_frac = eps_under / (1.0 + eps_under);
    let lt_frac = if degeneracy.k_m_zero {
        0.0
    } else {
        2.0 * k_m / (k_m + (k_m * k_m + 4.0 * e0 * k_m).sqrt())
    };

    DimensionlessGroups {
        eps_ss: e0 / (k_m + s0),
        eta,
        eps_star,
        eps_sm: eps_star + s0 / e0,
        sigma,
        kappa,
        nu,
        nu_tilde: k_cat / k_off,
        beta,
        mu,
        alpha,
        ell: s0 / e0,
        eps_ratio: t_c / t_d,
        eps_under,
        eps_tilde,
        eps_t: t_c_star / t_p,
        eps_t_kinetic: t_c_star * k_cat / t_p,
        eps_d: (lambda / s0) * nu * under_frac,
        eps_l: sat * nu * under_frac,
        eps_lt: sat * nu * lt_frac,
        theta_ext: s0 / (alpha * k_m + s0),
        degeneracy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn fig_final_groups() {
        let p = RateParameters::new(20.0, 10.0, 10.0, 10.0, 1000.0).unwrap();
        let g = dimensionless_groups(&p);
        assert!(close(g.eps_ss, 10.0 / 1001.0, 1e-14));
        assert_eq!(g.eta, 10.0);
        assert_eq!(g.nu, 0.5);
        assert!((g.eps_under - 99.1).abs() < 0.1);
        assert!((g.eps_l - 0.450).abs() < 1e-3);
        assert!((g.eps_lt - 0.1228).abs() < 1e-4);
        assert!((g.eps_t - 5.04e-7).abs() < 0.01e-7);
    }

    #[test]
    fn eps_t_matches_direct_expression() {
        let p = RateParameters::new(20.0, 10.0, 10.0, 10.0, 1000.0).unwrap();
        let g = dimensionless_groups(&p);
        let a = p.e0 + p.k_m() + p.s0;
        let sd = (a * a - 4.0 * p.e0 * p.s0).sqrt();
        let direct = (a - sd) / (2.0 * p.s0 * p.k1 * sd);
        assert!(close(g.eps_t, direct, 1e-9));
    }

    #[test]
    fn k_cat_zero_limits() {
        let p = RateParameters::new(1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let g = dimensionless_groups(&p);
        assert_eq!(g.nu, 0.0);
        assert_eq!(g.alpha, 1.0);
        assert_eq!(g.kappa, f64::INFINITY);
        assert!(g.degeneracy.k_cat_zero);
    }

    #[test]
    fn small_eta_instance() {
        let p = RateParameters::new(1.0, 1.0, 1.0, 0.01, 10.0).unwrap();
        let g = dimensionless_groups(&p);
        assert!(close(g.eta, 0.005, 1e-14));
        assert!(close(g.eps_ss, 0.01 / 12.0, 1e-14));
    }

    #[test]
    fn k_m_zero_eps_under_limit() {
        let above = RateParameters::new(1.0, 0.0, 0.0, 2.0, 5.0).unwrap();
        assert_eq!(dimensionless_groups(&above).eps_under, 1.5);
        let below = RateParameters::new(1.0, 0.0, 0.0, 5.0, 2.0).unwrap();
        assert_eq!(dimensionless_groups(&below).eps_under, 0.0);
    }

    #[test]
    fn eps_under_approaches_its_limit() {
        for &(e0, s0, limit) in &[(2.0, 5.0, 1.5), (5.0, 2.0, 0.0)] {
            let p = RateParameters::new(1.0, 0.5e-9, 0.5e-9, e0, s0).unwrap();
            let g = dimensionless_groups(&p);
            assert!((g.eps_under - limit).abs() < 1e-6);
        }
    }
}
