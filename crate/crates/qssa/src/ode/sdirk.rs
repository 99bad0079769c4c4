//! Five-stage, stiffly accurate, L-stable SDIRK of order 4 (γ = 1/4) with an
//! embedded order-3 solution. Stage equations are solved by simplified Newton
//! with one LU of `I − hγJ` per step attempt.

use nalgebra::{DMatrix, DVector};

use super::system::OdeSystem;

pub(crate) const GAMMA: f64 = 0.25;

pub(crate) const C: [f64; 5] = [0.25, 0.75, 11.0 / 20.0, 0.5, 1.0];

pub(crate) const A: [[f64; 5]; 5] = [
    [0.25, 0.0, 0.0, 0.0, 0.0],
    [0.5, 0.25, 0.0, 0.0, 0.0],
    [17.0 / 50.0, -1.0 / 25.0, 0.25, 0.0, 0.0],
    [371.0 / 1360.0, -137.0 / 2720.0, 15.0 / 544.0, 0.25, 0.0],
    [25.0 / 24.0, -49.0 / 48.0, 125.0 / 16.0, -85.0 / 12.0, 0.25],
];

pub(crate) const B: [f64; 5] = A[4];

pub(crate) const B_HAT: [f64; 5] = [59.0 / 48.0, -17.0 / 96.0, 225.0 / 32.0, -85.0 / 12.0, 0.0];

const NEWTON_MAX_ITER: usize = 12;
/// Newton stops once the weighted update norm falls below this fraction of the tolerance.
const NEWTON_TOL: f64 = 1e-3;

pub(crate) struct ImplicitStep {
    pub y: Vec<f64>,
    pub err: Vec<f64>,
    pub rhs_evals: usize,
}

pub(crate) enum ImplicitOutcome {
    Done(ImplicitStep),
    /// Newton failed to converge or the matrix was singular.
    NewtonFailure {
        rhs_evals: usize,
    },
}

pub(crate) fn step<S: OdeSystem + ?Sized>(
    sys: &S,
    t: f64,
    y: &[f64],
    f0: &[f64],
    jac: &DMatrix<f64>,
    h: f64,
    scale: &[f64],
) -> ImplicitOutcome {
    let n = y.len();
    let hg = h * GAMMA;
    let m = DMatrix::<f64>::identity(n, n) - jac * hg;
    let lu = m.lu();
    if lu.determinant() == 0.0 || !lu.determinant().is_finite() {
        return ImplicitOutcome::NewtonFailure { rhs_evals: 0 };
    }

    let wnorm = |v: &[f64]| -> f64 {
        (v.iter()
            .zip(scale)
            .map(|(a, s)| (a / s).powi(2))
            .sum::<f64>()
            / n as f64)
            .sqrt()
    };

    let mut evals = 0;
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 5];
    let mut fz = vec![0.0; n];
    let mut z = vec![0.0; n];
    for s in 0..5 {
        let known: Vec<f64> = (0..n)
            .map(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>())
            .collect();
        let guess = if s == 0 { f0 } else { &k[s - 1] };
        for i in 0..n {
            z[i] = known[i] + hg * guess[i];
        }
        let ts = t + C[s] * h;
        let mut converged = false;
        let mut prev_norm = f64::INFINITY;
        for it in 0..NEWTON_MAX_ITER {
            sys.rhs(ts, &z, &mut fz);
            evals += 1;
            let res = DVector::from_iterator(n, (0..n).map(|i| -(z[i] - hg * fz[i] - known[i])));
            let delta = match lu.solve(&res) {
                Some(d) => d,
                None => return ImplicitOutcome::NewtonFailure { rhs_evals: evals },
            };
            for i in 0..n {
                z[i] += delta[i];
            }
            let dn = wnorm(delta.as_slice());
            if !dn.is_finite() {
                return ImplicitOutcome::NewtonFailure { rhs_evals: evals };
            }
            if dn <= NEWTON_TOL {
                converged = true;
                break;
            }
            if it >= 1 && dn > 0.9 * prev_norm {
                break;
            }
            prev_norm = dn;
        }
        if !converged {
            return ImplicitOutcome::NewtonFailure { rhs_evals: evals };
        }
        for i in 0..n {
            k[s][i] = (z[i] - known[i]) / hg;
        }
    }

    // stiffly accurate: the last stage is the solution
    let raw = DVector::from_iterator(
        n,
        (0..n).map(|i| h * (0..5).map(|s| (B[s] - B_HAT[s]) * k[s][i]).sum::<f64>()),
    );
    // (I − hγJ)⁻¹ filters stiff components out of the estimate
    let err = lu.solve(&raw).unwrap_or(raw);
    ImplicitOutcome::Done(ImplicitStep {
        y: z,
        err: err.as_slice().to_vec(),
        rhs_evals: evals,
    })
}
