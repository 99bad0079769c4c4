//! Reaction parameterization: derived constants, small parameters,
//! timescales, nullclines and regime verdicts. Everything here is a pure
//! function of [`RateParameters`].

mod groups;
mod nullclines;
mod params;
mod regime;
mod timescales;

pub use groups::{dimensionless_groups, Degeneracy, DimensionlessGroups};
pub use nullclines::{nullclines, Nullclines};
pub use params::{complex_roots, derive_constants, ComplexRoots, DerivedConstants, RateParameters};
#[allow(unused_imports)]
pub(crate) use regime::regime_from_values;
pub use regime::{classify_regime, verdict, Qualifier, RegimeReport, Thresholds, Verdict};
pub use timescales::{t_cstar_from_gaps, timescales, TimeChart, Timescales};
