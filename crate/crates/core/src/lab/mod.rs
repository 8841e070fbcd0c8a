//! Executable versions of the functional inequalities.
//!
//! Each inequality is a gap function returning both sides; [`suites`] sweeps
//! them over seeded random inputs for the built-in families and reports the
//! most adverse sample as a replayable witness.

mod discrete;
mod fc;
mod gaps;
mod report;
pub mod suites;

pub use discrete::{diaz_saa_scale, diaz_saa_value, ray_convexity_probe, RayProbe};
pub use fc::{default_fc_samples, f2_monotonicity_check, fc_check, FCFunction, FcReport};
pub use gaps::{
    conjugate_sandwich_gap, hidden_convexity_gap, monotone_difference_gap, picone_constant, picone_gap,
    picone_regime, scaling_gap, signed_g, tolerance, truncation, young_gap, Gap,
};
pub use report::{InequalityReport, Witness};
pub use suites::{default_families, picone_regime_counts, run_suite, Suite, SweepConfig};

#[cfg(test)]
mod tests;
