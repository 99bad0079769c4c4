use proptest::prelude::*;
use qssa::estimation::{fit, synthesize, FitSpec, ProgressCurve};
use qssa::mm::Verdict;
use qssa::ode::lin_grid;
use qssa::reductions::ReducedModelKind;
use qssa::{classify_regime, dimensionless_groups, timescales, RateParameters, Thresholds};

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn rescaled(curve: &ProgressCurve, factor: f64) -> ProgressCurve {
    ProgressCurve {
        times: curve.times.iter().map(|t| t * factor).collect(),
        ..curve.clone()
    }
}

/// 50 samples over three slow timescales, skipping the first fiftieth.
fn samples(t_slow: f64) -> Vec<f64> {
    lin_grid(0.06 * t_slow, 3.0 * t_slow, 50)
}

#[test]
fn noisy_reverse_fit_within_five_percent() {
    let p = RateParameters::new(1.0, 0.005, 0.005, 100.0, 100.0).unwrap();
    let curve = synthesize(&p, &lin_grid(10.0, 1000.0, 100), 0.01 * p.s0, 2024).unwrap();
    let spec = FitSpec::new(ReducedModelKind::Rqssa)
        .free("k_cat", 0.02)
        .known("k_m", p.k_m());
    let res = fit(&curve, &spec).unwrap();
    assert!(res.converged);
    assert!(
        rel(res.estimates["k_cat"], p.k_cat) <= 0.05,
        "{}",
        res.estimates["k_cat"]
    );
    assert!(res.ssr_history.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(res.regime.rqssa.verdict, Verdict::Valid);
}

#[test]
fn standard_fit_at_small_eta() {
    let p = RateParameters::new(1.0, 1.0, 1.0, 0.01, 10.0).unwrap();
    assert!((dimensionless_groups(&p).eta - 0.005).abs() < 1e-15);
    let curve = synthesize(&p, &samples(timescales(&p).t_d), 0.0, 0).unwrap();
    let spec = FitSpec::new(ReducedModelKind::SqssaP)
        .free("v", 0.02)
        .free("k_m", 1.0);
    let res = fit(&curve, &spec).unwrap();
    assert!(res.converged, "{:?}", res.termination);
    assert!(
        rel(res.estimates["v"], p.v()) <= 0.01,
        "V {}",
        res.estimates["v"]
    );
    assert!(
        rel(res.estimates["k_m"], p.k_m()) <= 0.01,
        "K_M {}",
        res.estimates["k_m"]
    );
    assert_eq!(res.regime.sqssa.verdict, Verdict::Valid);
}

#[test]
fn time_unit_rescaling() {
    let p = RateParameters::new(1.0, 1.0, 1.0, 0.01, 10.0).unwrap();
    let curve = synthesize(&p, &samples(timescales(&p).t_d), 1e-3, 5).unwrap();
    let spec = |v0: f64| {
        FitSpec::new(ReducedModelKind::SqssaP)
            .free("v", v0)
            .free("k_m", 1.0)
    };
    let a = fit(&curve, &spec(0.02)).unwrap();
    let b = fit(&rescaled(&curve, 10.0), &spec(0.002)).unwrap();
    assert!(rel(b.estimates["v"], a.estimates["v"] / 10.0) <= 1e-8);
    assert!(rel(b.estimates["k_m"], a.estimates["k_m"]) <= 1e-8);

    let q = RateParameters::new(1.0, 0.005, 0.005, 100.0, 100.0).unwrap();
    let curve = synthesize(&q, &lin_grid(10.0, 1000.0, 100), 0.5, 6).unwrap();
    let spec = |k0: f64| FitSpec::new(ReducedModelKind::Rqssa).free("k_cat", k0);
    let a = fit(&curve, &spec(0.02)).unwrap();
    let b = fit(&rescaled(&curve, 10.0), &spec(0.002)).unwrap();
    assert!(rel(b.estimates["k_cat"], a.estimates["k_cat"] / 10.0) <= 1e-8);
}

fn in_own_regime(p: &RateParameters, model: ReducedModelKind) -> bool {
    let r = classify_regime(&dimensionless_groups(p), &Thresholds::default());
    let q = match model {
        ReducedModelKind::Rqssa => r.rqssa.value,
        ReducedModelKind::SqssaP => r.sqssa.value,
        _ => r.tqssa.value,
    };
    q <= 0.01
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn reverse_round_trip(k_m in -4.0..-2.0f64, e0 in 0.0..3.0f64, ratio in 0.1..1.0f64, guess in 0.5..2.0f64) {
        let (k_m, e0) = (10f64.powf(k_m), 10f64.powf(e0));
        let p = RateParameters::new(1.0, k_m / 2.0, k_m / 2.0, e0, ratio * e0).unwrap();
        prop_assume!(in_own_regime(&p, ReducedModelKind::Rqssa));
        let curve = synthesize(&p, &samples(1.0 / p.k_cat), 0.0, 0).unwrap();
        let spec = FitSpec::new(ReducedModelKind::Rqssa).free("k_cat", guess * p.k_cat);
        let res = fit(&curve, &spec).unwrap();
        prop_assert!(res.converged);
        prop_assert!(rel(res.estimates["k_cat"], p.k_cat) <= 0.01, "{} vs {}", res.estimates["k_cat"], p.k_cat);
        prop_assert!(res.ssr_history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn standard_round_trip(k_m in -1.0..2.0f64, eta in -4.0..-2.0f64, sigma in 2.0..10.0f64,
                           kappa in 0.1..10.0f64, guess in 0.5..2.0f64) {
        // s0 ≥ 2K_M: below that V and K_M drift together
        let k_m = 10f64.powf(k_m);
        let e0 = 10f64.powf(eta) * k_m;
        let p = RateParameters::new(1.0, k_m * kappa / (1.0 + kappa), k_m / (1.0 + kappa), e0, sigma * k_m).unwrap();
        prop_assume!(in_own_regime(&p, ReducedModelKind::SqssaP));
        let curve = synthesize(&p, &samples(timescales(&p).t_d), 0.0, 0).unwrap();
        let spec = FitSpec::new(ReducedModelKind::SqssaP)
            .free("v", guess * p.v())
            .free("k_m", p.k_m() / guess);
        let res = fit(&curve, &spec).unwrap();
        prop_assert!(res.converged, "{:?}", res.termination);
        prop_assert!(rel(res.estimates["v"], p.v()) <= 0.01, "V {} vs {}", res.estimates["v"], p.v());
        prop_assert!(rel(res.estimates["k_m"], p.k_m()) <= 0.01, "K_M {} vs {}", res.estimates["k_m"], p.k_m());
        prop_assert!(res.ssr_history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn total_round_trip(e0 in -1.0..2.0f64, sigma in 0.5..3.0f64, nu in -4.0..-1.5f64, guess in 0.5..2.0f64) {
        // ε_LT ≤ ν, so a small catalytic fraction puts the instance in the tQSSA regime
        let e0 = 10f64.powf(e0);
        let k_m = e0;
        let nu = 10f64.powf(nu);
        let p = RateParameters::new(1.0, k_m * (1.0 - nu), k_m * nu, e0, sigma * (k_m + e0)).unwrap();
        prop_assume!(in_own_regime(&p, ReducedModelKind::Tqssa));
        let t_slow = p.s0 / (p.k_cat * qssa::derive_constants(&p).lambda);
        let curve = synthesize(&p, &samples(t_slow), 0.0, 0).unwrap();
        // K_M stays fixed: with it free the pair is too collinear for 1% near ε_LT = 0.01
        let spec = FitSpec::new(ReducedModelKind::Tqssa)
            .free("k_cat", guess * p.k_cat)
            .fixed("k_m", p.k_m());
        let res = fit(&curve, &spec).unwrap();
        prop_assert!(res.converged, "{:?}", res.termination);
        prop_assert!(rel(res.estimates["k_cat"], p.k_cat) <= 0.01, "k_cat {} vs {}", res.estimates["k_cat"], p.k_cat);
        prop_assert!(res.ssr_history.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn total_fit_with_free_k_m_at_moderate_substrate() {
    let nu = 1e-3;
    let p = RateParameters::new(1.0, 1.0 - nu, nu, 1.0, 6.0).unwrap();
    let t_slow = p.s0 / (p.k_cat * qssa::derive_constants(&p).lambda);
    let curve = synthesize(&p, &samples(t_slow), 0.0, 0).unwrap();
    let spec = FitSpec::new(ReducedModelKind::Tqssa)
        .free("k_cat", 2.0 * p.k_cat)
        .free("k_m", 0.5 * p.k_m());
    let res = fit(&curve, &spec).unwrap();
    assert!(res.converged);
    assert!(rel(res.estimates["k_cat"], p.k_cat) <= 0.01);
    assert!(rel(res.estimates["k_m"], p.k_m()) <= 0.01);
    assert!(!res.condition_warning);
}
