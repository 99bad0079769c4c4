use proptest::prelude::*;
use qssa::ode::{conservation_defect, reference_config, simulate, IntegratorConfig};
use qssa::{derive_constants, timescales, RateParameters};

fn log_uniform() -> impl Strategy<Value = f64> {
    (-3.0..3.0f64).prop_map(|x| 10f64.powf(x))
}

prop_compose! {
    fn params()(k1 in log_uniform(), k_off in log_uniform(), k_cat in log_uniform(),
                e0 in log_uniform(), s0 in log_uniform()) -> RateParameters {
        RateParameters::new(k1, k_off, k_cat, e0, s0).unwrap()
    }
}

/// Long enough for the slow phase to be mostly over.
fn horizon(p: &RateParameters) -> f64 {
    let ts = timescales(p);
    10.0 * ts.t_c.max(ts.t_d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reference_runs_conserve_and_stay_below_lambda(p in params()) {
        let tr = simulate(&p, horizon(&p), &reference_config(&p)).unwrap();
        prop_assert!(conservation_defect(&tr, p.s0) <= 1e-8 * p.s0);
        let lam = derive_constants(&p).lambda;
        let c_max = tr.component(1).into_iter().fold(0.0, f64::max);
        prop_assert!(c_max <= lam * (1.0 + 1e-8), "c {c_max} lambda {lam}");
        // monotone up to the per-component error tolerance
        let (rtol, atol) = (tr.meta.rtol, tr.meta.atol);
        let pp = tr.component(2);
        prop_assert!(pp.windows(2).all(|w| w[1] >= w[0] - (atol + rtol * w[0])));
        // e is never integrated, only derived as e0 − c
        prop_assert_eq!(tr.dim(), 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn halving_tolerances_is_self_consistent(p in params()) {
        let t_end = horizon(&p);
        let coarse_cfg = IntegratorConfig::with_tolerances(1e-6, 1e-9 * p.s0.min(p.e0));
        let fine_cfg = IntegratorConfig::with_tolerances(5e-7, 5e-10 * p.s0.min(p.e0));
        let coarse = simulate(&p, t_end, &coarse_cfg).unwrap();
        let fine = simulate(&p, t_end, &fine_cfg).unwrap();
        let gap = coarse
            .last_state()
            .iter()
            .zip(fine.last_state())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(
            gap <= coarse.meta.local_error_sum,
            "gap {gap} estimate {}",
            coarse.meta.local_error_sum
        );
    }
}
