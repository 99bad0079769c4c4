//! Parameter sets behind the reference figures.

use serde::Serialize;

use crate::mm::RateParameters;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigurePreset {
    pub name: &'static str,
    pub params: RateParameters,
    pub notes: Vec<&'static str>,
}

pub const PRESET_NAMES: [&str; 4] = ["fig-eqssa", "fig-21-left", "fig-21-right", "fig-final"];

fn rp(k1: f64, k_off: f64, k_cat: f64, e0: f64, s0: f64) -> RateParameters {
    RateParameters {
        k1,
        k_off,
        k_cat,
        e0,
        s0,
    }
}

pub fn preset(name: &str) -> Option<FigurePreset> {
    let (params, notes) = match name {
        "fig-eqssa" => (
            rp(10.0, 10.0, 0.01, 2.001, 1.0),
            vec![
                "k1 = k_off = 10, k_cat = 0.01 as captioned; K_M = 1.001",
                "eps_SS = 1 fixes only e0 = K_M + s0; completed with s0 = 1, e0 = 2.001",
                "compares EXTENDED (Riccati start) with EQSSA_SEGEL (start (sqrt2 - 1)s0)",
            ],
        ),
        "fig-21-left" => (
            rp(0.1, 10.0, 10.0, 1.0, 20.0),
            vec!["s0 = 20, e0 = 1, k_cat = k_off = 10, k1 = 0.1 as captioned; K_M = 200"],
        ),
        "fig-21-right" => (
            rp(1.0, 1.0, 0.01, 2.02, 1.01),
            vec![
                "k1 = k_off = 1, k_cat = 0.01; K_M = 1.01",
                "sigma = 1 and eps_SS = 1 completed as s0 = K_M*sigma = 1.01, e0 = K_M + s0 = 2.02",
            ],
        ),
        "fig-final" => (
            rp(20.0, 10.0, 10.0, 10.0, 1000.0),
            vec!["e0 = 10, s0 = 1000, k1 = 20, k_off = 10, k_cat = 10 as captioned"],
        ),
        _ => return None,
    };
    Some(FigurePreset {
        name: PRESET_NAMES.iter().copied().find(|n| *n == name)?,
        params,
        notes,
    })
}
