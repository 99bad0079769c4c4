use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmOptions {
    /// Stop when every component of the last step is below `xtol·|x|`.
    pub xtol: f64,
    /// Stop when the largest cosine between the residual and a Jacobian column is below this.
    pub gtol: f64,
    pub max_iter: usize,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            xtol: 1e-10,
            gtol: 1e-12,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Gradient,
    Step,
    /// Residual is exactly zero.
    ExactFit,
    IterationCap,
    /// Damping grew without finding a decrease.
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    pub iterations: usize,
    pub termination: Termination,
    /// SSR at the start and after every accepted step.
    pub ssr_history: Vec<f64>,
    /// Jacobian at `x`, one row per residual.
    pub jacobian: DMatrix<f64>,
}

impl LmOutcome {
    pub fn converged(&self) -> bool {
        matches!(
            self.termination,
            Termination::Gradient | Termination::Step | Termination::ExactFit
        )
    }
}

const MU_MAX: f64 = 1e20;
const MAX_TRIALS: usize = 40;

fn ssr(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn clamp(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].clamp(lo[i], hi[i]);
    }
}

/// Forward differences with step √ε·scale, stepping backwards at an upper bound.
fn jacobian<F>(f: &F, x: &[f64], r: &[f64], scale: &[f64], hi: &[f64]) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let sqrt_eps = f64::EPSILON.sqrt();
    let mut j = DMatrix::zeros(r.len(), x.len());
    let mut xp = x.to_vec();
    for k in 0..x.len() {
        let mut h = sqrt_eps * scale[k];
        if x[k] + h > hi[k] {
            h = -h;
        }
        xp[k] = x[k] + h;
        let h_actual = xp[k] - x[k];
        let rp = f(&xp)?;
        for i in 0..r.len() {
            j[(i, k)] = (rp[i] - r[i]) / h_actual;
        }
        xp[k] = x[k];
    }
    Ok(j)
}

/// Box-constrained Levenberg–Marquardt on residuals `f(x)`.
///
/// Damping is Marquardt's diag(JᵀJ) scaling, so the iteration is invariant
/// under rescaling of individual parameters. Trial points are clamped into
/// the box; a trial is accepted only if it lowers the sum of squares, so the
/// accepted SSR sequence is nonincreasing. Trial evaluations that fail count
/// as rejections.
pub fn levenberg_marquardt<F>(
    f: F,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &LmOptions,
) -> Result<LmOutcome>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    clamp(&mut x, lower, upper);
    let scale: Vec<f64> = x0
        .iter()
        .map(|v| if v.abs() > 0.0 { v.abs() } else { 1.0 })
        .collect();
    let mut r = f(&x)?;
    let mut s = ssr(&r);
    let mut history = vec![s];
    let mut mu = 1e-3;
    let mut iterations = 0;
    let mut termination = Termination::IterationCap;
    let mut jac = jacobian(&f, &x, &r, &scale, upper)?;

    while iterations < opts.max_iter {
        if s == 0.0 {
            termination = Termination::ExactFit;
            break;
        }
        let rv = DVector::from_column_slice(&r);
        let g = jac.transpose() * &rv;
        let a = jac.transpose() * &jac;
        let r_norm = s.sqrt();
        let cosine = (0..n)
            .map(|k| {
                let col = jac.column(k).norm();
                if col > 0.0 {
                    g[k].abs() / (col * r_norm)
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max);
        if cosine <= opts.gtol {
            termination = Termination::Gradient;
            break;
        }
        iterations += 1;

        let diag: Vec<f64> = (0..n).map(|k| a[(k, k)].max(f64::MIN_POSITIVE)).collect();
        let mut accepted = false;
        let mut tiny_step = false;
        for _ in 0..MAX_TRIALS {
            let mut m = a.clone();
            for k in 0..n {
                m[(k, k)] += mu * diag[k];
            }
            let step = match m.cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => {
                    mu *= 4.0;
                    continue;
                }
            };
            let mut xt: Vec<f64> = (0..n).map(|k| x[k] + step[k]).collect();
            clamp(&mut xt, lower, upper);
            let small = (0..n)
                .all(|k| (xt[k] - x[k]).abs() <= opts.xtol * x[k].abs().max(f64::MIN_POSITIVE));
            let trial = f(&xt).ok().filter(|rt| rt.iter().all(|v| v.is_finite()));
            match trial {
                Some(rt) if ssr(&rt) < s => {
                    x = xt;
                    r = rt;
                    s = ssr(&r);
                    history.push(s);
                    mu = (mu / 3.0).max(1e-15);
                    accepted = true;
                    tiny_step = small;
                    break;
                }
                _ => {
                    if small {
                        tiny_step = true;
                        break;
                    }
                    mu *= 4.0;
                    if mu > MU_MAX {
                        break;
                    }
                }
            }
        }
        if accepted {
            jac = jacobian(&f, &x, &r, &scale, upper)?;
        }
        if tiny_step {
            termination = Termination::Step;
            break;
        }
        if !accepted {
            termination = Termination::Stalled;
            break;
        }
    }

    Ok(LmOutcome {
        x,
        residuals: r,
        ssr: s,
        iterations,
        termination,
        ssr_history: history,
        jacobian: jac,
    })
}

/// Condition number of the Jacobian after scaling each column to unit norm.
pub fn scaled_condition_number(jac: &DMatrix<f64>) -> f64 {
    if jac.ncols() == 0 || jac.nrows() == 0 {
        return 1.0;
    }
    let mut m = jac.clone();
    for k in 0..m.ncols() {
        let norm = m.column(k).norm();
        if norm > 0.0 {
            m.column_mut(k).scale_mut(1.0 / norm);
        }
    }
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}
