use super::trajectory::Trajectory;
use crate::error::{Error, Result};

/// Index of the complex concentration in mass-action states.
const C_INDEX: usize = 1;

/// End of the initial fast transient.
///
/// If c has an interior maximum, its time (refined by bisection on the
/// Hermite derivative). Otherwise c is monotone and the marker is the first
/// time after the steepest point at which |dc/dt| drops below
/// `rtol·max|dc/dt|`, with `rtol` taken from the trajectory metadata.
pub fn detect_transient_end(traj: &Trajectory) -> Result<f64> {
    if traj.dim() <= C_INDEX {
        return Err(Error::QuantityUnavailable {
            need: C_INDEX + 1,
            have: traj.dim(),
        });
    }
    let c = traj.component(C_INDEX);
    let (imax, cmax) = c
        .iter()
        .copied()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    if !(cmax > traj.meta.atol) {
        return Err(Error::NoTransient);
    }
    let n = c.len();
    if imax > 0 && imax + 1 < n {
        let slope = traj.derivatives[imax][C_INDEX];
        let (mut lo, mut hi) = if slope > 0.0 {
            (traj.times[imax], traj.times[imax + 1])
        } else {
            (traj.times[imax - 1], traj.times[imax])
        };
        let dc = |t: f64| traj.interpolate_derivative(t)[C_INDEX];
        if dc(lo) > 0.0 && dc(hi) < 0.0 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if dc(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        return Ok(traj.times[imax]);
    }

    let slopes: Vec<f64> = traj.derivatives.iter().map(|d| d[C_INDEX].abs()).collect();
    let (isteep, dmax) = slopes
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let cut = traj.meta.rtol * dmax;
    Ok(slopes[isteep..]
        .iter()
        .position(|&d| d < cut)
        .map(|k| traj.times[isteep + k])
        .unwrap_or_else(|| traj.t_end()))
}
