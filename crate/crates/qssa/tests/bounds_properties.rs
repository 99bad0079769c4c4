use proptest::prelude::*;
use qssa::bounds::{
    envelope, generic_gronwall, tqssa_gronwall_spec, verification_horizon, verification_trajectory,
    verify, BoundKind, Envelope, DEFAULT_SLACK,
};
use qssa::{dimensionless_groups, RateParameters};

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
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn envelopes_hold_along_reference_runs(p in params()) {
        let envs: Vec<Envelope> = BoundKind::ALL.iter().map(|&k| envelope(k, &p).unwrap()).collect();
        let tr = verification_trajectory(&p, verification_horizon(&envs)).unwrap();
        for env in &envs {
            let rep = verify(&tr, env, DEFAULT_SLACK).unwrap();
            let kind = env.kind.unwrap();
            prop_assert!(rep.holds, "{kind} violated by {}", rep.max_violation);
            if !env.vacuous {
                let ls = rep.limsup_estimate.unwrap();
                prop_assert!(ls <= env.b, "{kind} limsup {ls} > B {}", env.b);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn gronwall_reproduces_nullcline(p in params()) {
        let g = generic_gronwall(&tqssa_gronwall_spec(&p));
        let t = envelope(BoundKind::TqssaNullcline, &p).unwrap();
        prop_assert!(rel(g.a, t.a) <= 1e-12 && rel(g.r, t.r) <= 1e-12 && rel(g.b, t.b) <= 1e-12);
    }

    #[test]
    fn tight_offset_below_nullcline_offset(p in params()) {
        prop_assume!(p.e0 <= p.s0);
        let tight = envelope(BoundKind::TqssaLimsupTight, &p).unwrap();
        let loose = envelope(BoundKind::TqssaNullcline, &p).unwrap();
        prop_assert!(tight.b <= loose.b * (1.0 + 1e-12), "{} > {}", tight.b, loose.b);
    }

    #[test]
    fn nullcline_rate_in_slow_units(p in params()) {
        let env = envelope(BoundKind::TqssaNullcline, &p).unwrap();
        let g = dimensionless_groups(&p);
        prop_assert!(rel(env.rate_in_tz_units(&p), 0.5 / g.eps_d) <= 1e-12);
        prop_assert!(rel(env.offset_over_lambda(&p), g.eps_l) <= 1e-12);
    }
}
