use serde::Serialize;

use super::groups::DimensionlessGroups;

/// Cutoffs for "≪ 1". Both are configurable; nothing in the theory pins them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub valid: f64,
    pub marginal: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            valid: 0.1,
            marginal: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    Marginal,
    Invalid,
    /// The qualifier could not be evaluated (missing constants or NaN).
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Qualifier {
    pub approximation: &'static str,
    pub qualifier: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub sqssa: Qualifier,
    pub rqssa: Qualifier,
    pub extended: Qualifier,
    pub tqssa: Qualifier,
    /// ε_SS and β accompany the extended verdict: the ν gate presumes both are O(1) or smaller.
    pub extended_eps_ss: f64,
    pub extended_beta: f64,
}

impl RegimeReport {
    pub fn qualifiers(&self) -> [&Qualifier; 4] {
        [&self.sqssa, &self.rqssa, &self.extended, &self.tqssa]
    }
}

pub fn verdict(value: f64, th: &Thresholds) -> Verdict {
    if value.is_nan() {
        Verdict::Undetermined
    } else if value <= th.valid {
        Verdict::Valid
    } else if value <= th.marginal {
        Verdict::Marginal
    } else {
        Verdict::Invalid
    }
}

pub(crate) fn qualifier(
    approximation: &'static str,
    name: &'static str,
    value: f64,
    th: &Thresholds,
) -> Qualifier {
    Qualifier {
        approximation,
        qualifier: name,
        value,
        threshold: th.valid,
        verdict: verdict(value, th),
    }
}

/// Gates from the table of small parameters: sQSSA on η, rQSSA on ε̲,
/// extended on ν, tQSSA on ε_LT.
pub fn classify_regime(groups: &DimensionlessGroups, thresholds: &Thresholds) -> RegimeReport {
    regime_from_values(
        groups.eta,
        groups.eps_under,
        groups.nu,
        groups.eps_lt,
        groups.eps_ss,
        groups.beta,
        thresholds,
    )
}

pub(crate) fn regime_from_values(
    eta: f64,
    eps_under: f64,
    nu: f64,
    eps_lt: f64,
    eps_ss: f64,
    beta: f64,
    th: &Thresholds,
) -> RegimeReport {
    RegimeReport {
        sqssa: qualifier("sQSSA", "eta", eta, th),
        rqssa: qualifier("rQSSA", "eps_under", eps_under, th),
        extended: qualifier("extended", "nu", nu, th),
        tqssa: qualifier("tQSSA", "eps_LT", eps_lt, th),
        extended_eps_ss: eps_ss,
        extended_beta: beta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mm::{dimensionless_groups, RateParameters};

    #[test]
    fn fig_final_verdicts() {
        let p = RateParameters::new(20.0, 10.0, 10.0, 10.0, 1000.0).unwrap();
        let r = classify_regime(&dimensionless_groups(&p), &Thresholds::default());
        assert_eq!(r.sqssa.verdict, Verdict::Invalid);
        assert_eq!(r.rqssa.verdict, Verdict::Invalid);
        assert_eq!(r.tqssa.verdict, Verdict::Marginal);
    }

    #[test]
    fn reverse_regime_valid() {
        let p = RateParameters::new(1.0, 0.005, 0.005, 100.0, 100.0).unwrap();
        let g = dimensionless_groups(&p);
        assert!((g.eps_under - 0.0101).abs() < 1e-4);
        let r = classify_regime(&g, &Thresholds::default());
        assert_eq!(r.rqssa.verdict, Verdict::Valid);
    }

    #[test]
    fn small_eta_is_standard() {
        let p = RateParameters::new(1.0, 1.0, 1.0, 0.01, 10.0).unwrap();
        let r = classify_regime(&dimensionless_groups(&p), &Thresholds::default());
        assert_eq!(r.sqssa.verdict, Verdict::Valid);
    }

    #[test]
    fn nan_is_undetermined() {
        assert_eq!(
            verdict(f64::NAN, &Thresholds::default()),
            Verdict::Undetermined
        );
        assert_eq!(
            verdict(f64::INFINITY, &Thresholds::default()),
            Verdict::Invalid
        );
    }
}
