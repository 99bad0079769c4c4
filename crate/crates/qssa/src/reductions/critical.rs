use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mm::RateParameters;

/// Which rate constants are switched off to produce a manifold of equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tfp {
    KoffAndKcat,
    K1,
    E0,
    Kcat,
}

impl FromStr for Tfp {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "KOFF_AND_KCAT" => Ok(Tfp::KoffAndKcat),
            "K1" => Ok(Tfp::K1),
            "E0" => Ok(Tfp::E0),
            "KCAT" => Ok(Tfp::Kcat),
            _ => Err(format!("unknown TFP '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attracting,
    Repelling,
    Singular,
}

const SINGULAR_TOL: f64 = 1e-12;

fn stability(margin: f64) -> Stability {
    if margin.abs() <= SINGULAR_TOL {
        Stability::Singular
    } else if margin < 0.0 {
        Stability::Attracting
    } else {
        Stability::Repelling
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vertex {
    pub x: f64,
    pub y: f64,
    pub margin: f64,
    pub stability: Stability,
}

/// Stretch of a component, in its curve parameter, with one stability type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub from: f64,
    pub to: f64,
    pub stability: Stability,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    /// Implicit equation of the curve.
    pub label: String,
    pub vertices: Vec<Vertex>,
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPoint {
    pub x: f64,
    pub y: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSetDescription {
    pub tfp: Tfp,
    /// "(p_bar, c_hat)" with p̄ = p/s0, ĉ = c/s0, or "(s, c)" (dimensional).
    pub coordinates: &'static str,
    pub ell: f64,
    pub components: Vec<Component>,
    pub singular_points: Vec<SingularPoint>,
}

/// Transverse eigenvalue of the fast subsystem at a point of the critical set.
///
/// For `KoffAndKcat` the point is (p̄, ĉ) and the value is
/// ∂/∂ĉ[(1 − ℓĉ)(1 − ĉ − p̄)] = −ℓ(1 − ĉ − p̄) − (1 − ℓĉ) in scaled units.
/// For the other choices the point is dimensional (s, c) and the value has
/// units of 1/time. Negative means attracting.
pub fn hyperbolicity_margin(point: (f64, f64), params: &RateParameters, tfp: Tfp) -> f64 {
    let (x, y) = point;
    match tfp {
        Tfp::KoffAndKcat => {
            let ell = params.s0 / params.e0;
            -ell * (1.0 - y - x) - (1.0 - ell * y)
        }
        Tfp::K1 => -(params.k_off + params.k_cat),
        Tfp::E0 => -params.k1 * (x + params.k_m()),
        Tfp::Kcat => -params.k1 * (params.e0 - y) - params.k1 * x - params.k_off,
    }
}

const SAMPLES: usize = 101;

fn build_component(
    label: String,
    range: (f64, f64),
    curve: impl Fn(f64) -> (f64, f64),
    margin: impl Fn(f64, f64) -> f64,
    singular: &mut Vec<SingularPoint>,
) -> Component {
    let (a, b) = range;
    let params: Vec<f64> = (0..SAMPLES)
        .map(|i| a + (b - a) * i as f64 / (SAMPLES - 1) as f64)
        .collect();
    let m_at = |t: f64| {
        let (x, y) = curve(t);
        margin(x, y)
    };
    let vertices: Vec<Vertex> = params
        .iter()
        .map(|&t| {
            let (x, y) = curve(t);
            let m = margin(x, y);
            Vertex {
                x,
                y,
                margin: m,
                stability: stability(m),
            }
        })
        .collect();

    // zeros of the margin along the curve: exact hits or sign changes refined by bisection
    let mut zeros: Vec<f64> = Vec::new();
    for i in 0..params.len() {
        if vertices[i].margin.abs() <= SINGULAR_TOL {
            zeros.push(params[i]);
        } else if i + 1 < params.len()
            && vertices[i + 1].margin.abs() > SINGULAR_TOL
            && vertices[i].margin.signum() != vertices[i + 1].margin.signum()
        {
            let (mut lo, mut hi) = (params[i], params[i + 1]);
            let f_lo = vertices[i].margin;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = m_at(mid);
                if fm.abs() <= SINGULAR_TOL * 1e-3 || hi - lo <= SINGULAR_TOL * 1e-3 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == f_lo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
    }
    zeros.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    for &z in &zeros {
        let (x, y) = curve(z);
        let m = margin(x, y);
        if m.abs() <= SINGULAR_TOL
            && !singular
                .iter()
                .any(|sp| (sp.x - x).abs() < 1e-9 && (sp.y - y).abs() < 1e-9)
        {
            singular.push(SingularPoint { x, y, margin: m });
        }
    }

    let mut cuts = vec![a];
    cuts.extend(zeros.iter().copied().filter(|&z| z > a && z < b));
    cuts.push(b);
    let branches = cuts
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            Branch {
                from: w[0],
                to: w[1],
                stability: stability(m_at(mid)),
            }
        })
        .collect();
    Component {
        label,
        vertices,
        branches,
    }
}

/// Critical set obtained by zeroing `tfp`. The other constants of `params`
/// fix ℓ = s0/e0 and the dimensional scales.
pub fn critical_set(params: &RateParameters, tfp: Tfp) -> CriticalSetDescription {
    let ell = params.s0 / params.e0;
    let mut components = Vec::new();
    let mut singular = Vec::new();
    let margin = |x: f64, y: f64| hyperbolicity_margin((x, y), params, tfp);
    let coordinates = match tfp {
        Tfp::KoffAndKcat => {
            components.push(build_component(
                "1 - c_hat - p_bar = 0".into(),
                (0.0, 1.0),
                |t| (t, 1.0 - t),
                margin,
                &mut singular,
            ));
            if ell >= 1.0 - SINGULAR_TOL {
                components.push(build_component(
                    "1 - ell*c_hat = 0".into(),
                    (0.0, 1.0),
                    |t| (t, 1.0 / ell),
                    margin,
                    &mut singular,
                ));
            }
            "(p_bar, c_hat)"
        }
        Tfp::K1 | Tfp::E0 => {
            components.push(build_component(
                "c = 0".into(),
                (0.0, params.s0),
                |s| (s, 0.0),
                margin,
                &mut singular,
            ));
            "(s, c)"
        }
        Tfp::Kcat => {
            let k_s = params.k_s();
            components.push(build_component(
                "c = e0*s/(K_S + s)".into(),
                (0.0, params.s0),
                |s| (s, params.e0 * s / (k_s + s)),
                margin,
                &mut singular,
            ));
            "(s, c)"
        }
    };
    CriticalSetDescription {
        tfp,
        coordinates,
        ell,
        components,
        singular_points: singular,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalForm {
    /// Coefficient of p̄·u in du/dτ* = a·p̄·u + b·u².
    pub a: f64,
    pub b: f64,
    /// The same coefficients recovered by second differences of the fast field.
    pub taylor_a: f64,
    pub taylor_b: f64,
}

/// Transcritical normal form at (p̄, ĉ) = (0, 1) under u = 1 − ĉ. Needs e0 = s0.
pub fn normal_form_coefficients(params: &RateParameters) -> Result<NormalForm> {
    let ell = params.s0 / params.e0;
    if (ell - 1.0).abs() > 1e-12 {
        return Err(Error::NoTranscriticalPoint { ell });
    }
    // du/dτ* = −(1 − ℓĉ)(1 − ĉ − p̄) with ĉ = 1 − u
    let g = |pb: f64, u: f64| {
        let c = 1.0 - u;
        -(1.0 - ell * c) * (1.0 - c - pb)
    };
    // second differences are exact for the quadratic field; a wide stencil keeps rounding small
    let h = 0.5;
    let taylor_a = (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h);
    let taylor_b = (g(0.0, h) - 2.0 * g(0.0, 0.0) + g(0.0, -h)) / (2.0 * h * h);
    Ok(NormalForm {
        a: ell,
        b: -ell,
        taylor_a,
        taylor_b,
    })
}
