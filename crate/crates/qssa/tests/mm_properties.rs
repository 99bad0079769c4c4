use proptest::prelude::*;
use qssa::mm::{complex_roots, t_cstar_from_gaps};
use qssa::{derive_constants, dimensionless_groups, nullclines, timescales, RateParameters};

fn log_uniform() -> impl Strategy<Value = f64> {
    (-3.0..3.0f64).prop_map(|x| 10f64.powf(x))
}

prop_compose! {
    fn params()(k1 in log_uniform(), k_off in log_uniform(), k_cat in log_uniform(),
                e0 in log_uniform(), s0 in log_uniform()) -> RateParameters {
        RateParameters::new(k1, k_off, k_cat, e0, s0).unwrap()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn partition_identities(p in params()) {
        let g = dimensionless_groups(&p);
        prop_assert!((g.alpha + g.nu - 1.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert!((g.beta + g.mu - 1.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert!((g.eps_star * g.eta - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn small_parameter_ordering(p in params()) {
        let g = dimensionless_groups(&p);
        prop_assert!(g.eps_ratio <= g.eps_ss * (1.0 + 1e-14), "{} > {}", g.eps_ratio, g.eps_ss);
        prop_assert!(g.eps_d <= g.eps_l * (1.0 + 1e-12), "{} > {}", g.eps_d, g.eps_l);
    }

    #[test]
    fn vieta(p in params(), frac in 0.0..1.0f64) {
        let n = nullclines(&p);
        let pp = frac * p.s0;
        let (lo, hi) = (n.h_minus(pp).unwrap(), n.h_plus(pp).unwrap());
        prop_assert!(rel(lo * hi, p.e0 * (p.s0 - pp)) <= 1e-10);
        prop_assert!(rel(lo + hi, p.e0 + p.k_m() + p.s0 - pp) <= 1e-10);
    }

    #[test]
    fn t_cstar_forms_agree(p in params()) {
        prop_assert!(rel(timescales(&p).t_cstar, t_cstar_from_gaps(&p)) <= 1e-12);
    }

    #[test]
    fn lambda_limits(e0 in log_uniform(), s0 in log_uniform(), k_m in log_uniform()) {
        prop_assert_eq!(complex_roots(e0, 0.0, s0).lower, e0.min(s0));
        let lam = complex_roots(e0, k_m, s0).lower;
        prop_assert!(lam < complex_roots(e0, 0.5 * k_m, s0).lower);
        prop_assert!(lam > 0.0 && lam < e0.min(s0));
    }
}

#[test]
fn lambda_strictly_decreasing_in_k_m() {
    let mut prev = f64::INFINITY;
    for i in 0..60 {
        // k1 shrinks, so K_M = 2/k1 grows
        let k1 = 10f64.powf(3.0 - 0.1 * i as f64);
        let p = RateParameters::new(k1, 1.0, 1.0, 3.0, 7.0).unwrap();
        let lam = derive_constants(&p).lambda;
        assert!(lam < prev, "K_M {} lambda {lam}", p.k_m());
        prev = lam;
    }
}
