//! Flat records shared by `constants` and `sweep`, so a one-point sweep row
//! carries exactly the keys and values of `constants`.

use qssa::bounds::{envelope, BoundKind};
use qssa::mm::Verdict;
use qssa::{
    classify_regime, derive_constants, dimensionless_groups, timescales, RateParameters, Thresholds,
};

use crate::output::Record;

macro_rules! nums {
    ($rec:expr, $src:expr, [$($field:ident),* $(,)?]) => {
        $( $rec.num(stringify!($field), $src.$field); )*
    };
}

pub fn params_record(p: &RateParameters) -> Record {
    let mut r = Record::default();
    nums!(r, p, [k1, k_off, k_cat, e0, s0]);
    r
}

pub fn groups_record(p: &RateParameters) -> Record {
    let g = dimensionless_groups(p);
    let mut r = Record::default();
    nums!(
        r,
        g,
        [
            eps_ss,
            eta,
            eps_star,
            eps_sm,
            sigma,
            kappa,
            nu,
            nu_tilde,
            beta,
            mu,
            alpha,
            ell,
            eps_ratio,
            eps_under,
            eps_tilde,
            eps_t,
            eps_t_kinetic,
            eps_d,
            eps_l,
            eps_lt,
            theta_ext,
        ]
    );
    r.flag("degeneracy_k_m_zero", g.degeneracy.k_m_zero);
    r.flag("degeneracy_k_cat_zero", g.degeneracy.k_cat_zero);
    r.flag("degeneracy_k_off_zero", g.degeneracy.k_off_zero);
    r
}

pub fn timescales_record(p: &RateParameters) -> Record {
    let ts = timescales(p);
    let mut r = Record::default();
    nums!(r, ts, [t_c, t_d, t_cstar, t_p, t_ell, t_slow]);
    r
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Valid => "valid",
        Verdict::Marginal => "marginal",
        Verdict::Invalid => "invalid",
        Verdict::Undetermined => "undetermined",
    }
}

pub fn regime_record(p: &RateParameters) -> Record {
    let report = classify_regime(&dimensionless_groups(p), &Thresholds::default());
    let mut r = Record::default();
    for (name, q) in ["sqssa", "rqssa", "extended", "tqssa"]
        .iter()
        .zip(report.qualifiers())
    {
        r.text(format!("regime_{name}_qualifier"), q.qualifier);
        r.num(format!("regime_{name}_value"), q.value);
        r.text(format!("regime_{name}_verdict"), verdict_name(q.verdict));
    }
    r.num("regime_extended_eps_ss", report.extended_eps_ss);
    r.num("regime_extended_beta", report.extended_beta);
    r
}

/// Parameters, derived constants, groups, timescales and regime verdicts.
pub fn constants_record(p: &RateParameters) -> Record {
    let d = derive_constants(p);
    let mut r = params_record(p);
    nums!(r, d, [k_m, k_s, v, lambda]);
    r.extend(groups_record(p));
    r.extend(timescales_record(p));
    r.extend(regime_record(p));
    r
}

/// A, r, B and vacuity of every envelope; NaN where an envelope is degenerate.
pub fn envelopes_record(p: &RateParameters) -> Record {
    let mut r = Record::default();
    for kind in BoundKind::ALL {
        let key = kind.name().to_ascii_lowercase();
        match envelope(kind, p) {
            Ok(env) => {
                r.num(format!("{key}_a"), env.a);
                r.num(format!("{key}_r"), env.r);
                r.num(format!("{key}_b"), env.b);
                r.flag(format!("{key}_vacuous"), env.vacuous);
            }
            Err(_) => {
                r.num(format!("{key}_a"), f64::NAN);
                r.num(format!("{key}_r"), f64::NAN);
                r.num(format!("{key}_b"), f64::NAN);
                r.flag(format!("{key}_vacuous"), true);
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::Cell;

    #[test]
    fn constants_keys_are_unique_and_complete() {
        let p = RateParameters::new(20.0, 10.0, 10.0, 10.0, 1000.0).unwrap();
        let r = constants_record(&p);
        let mut keys: Vec<&str> = r.0.iter().map(|(k, _)| k.as_str()).collect();
        let n = keys.len();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), n);
        match r.get("eps_lt") {
            Some(Cell::Num(x)) => assert!((x - 0.1228).abs() < 5e-4),
            other => panic!("{other:?}"),
        }
        assert!(r.get("lambda").is_some() && r.get("t_p").is_some());
    }
}
