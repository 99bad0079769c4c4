//! Dormand–Prince 5(4) step with Hairer's stiffness indicator.

use super::system::OdeSystem;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// b − b̂, the embedded error weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub(crate) struct ExplicitStep {
    pub y: Vec<f64>,
    /// f(t + h, y), reusable as the first stage of the next step.
    pub f: Vec<f64>,
    pub err: Vec<f64>,
    /// h·‖k7 − k6‖/‖y7 − y6‖, an estimate of h times the dominant eigenvalue.
    pub h_rho: f64,
}

pub(crate) fn step<S: OdeSystem + ?Sized>(
    sys: &S,
    t: f64,
    y: &[f64],
    f0: &[f64],
    h: f64,
) -> ExplicitStep {
    let n = y.len();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    k[0].copy_from_slice(f0);
    let mut stage = vec![0.0; n];
    let mut y6 = vec![0.0; n];
    for s in 1..7 {
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..s {
                acc += A[s][j] * k[j][i];
            }
            stage[i] = y[i] + h * acc;
        }
        if s == 5 {
            y6.copy_from_slice(&stage);
        }
        sys.rhs(t + C[s] * h, &stage, &mut k[s]);
    }
    // stage 7 is evaluated at the new solution (FSAL)
    let y_new = stage;
    let mut err = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for s in 0..7 {
            acc += E[s] * k[s][i];
        }
        err[i] = h * acc;
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        num += (k[6][i] - k[5][i]).powi(2);
        den += (y_new[i] - y6[i]).powi(2);
    }
    let h_rho = if den > 0.0 {
        h * (num / den).sqrt()
    } else {
        0.0
    };
    ExplicitStep {
        y: y_new,
        f: k[6].clone(),
        err,
        h_rho,
    }
}
