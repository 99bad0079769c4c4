//! Energy-method error envelopes A·e^(−rt) + B for the QSSA variants, the
//! generic Gronwall envelope they all instantiate, and sampling-based
//! verification against computed trajectories.

mod envelope;
mod gronwall;
mod verify;

pub use envelope::{envelope, theta_at, BoundKind, Envelope, Quantity};
pub use gronwall::{generic_gronwall, tqssa_gronwall_spec, GronwallSpec};
pub use verify::{
    estimate_limsup, verification_horizon, verification_trajectory, verify, BoundReport,
    MarginSample, DEFAULT_SLACK, DEFAULT_TAIL_FRACTION, RESOLUTION_FACTOR,
};
