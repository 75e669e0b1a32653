//! Shared input builders for the pipeline benchmarks.
//!
//! The benches measure steady-state costs, so inputs are deterministic and
//! built once outside the timed loops.

use chanstat_core::dist::{DistributionSpec, Family};
use chanstat_core::measurement::{MeasurementSet, Scenario};
use chanstat_core::presets;
use chanstat_core::synthesis::ChannelStatistics;
use chanstat_core::{fixtures, Result};

/// Typical normalized-power sample: `n` draws from the Sello LOS power
/// distribution.
pub fn power_sample(n: usize) -> Vec<f64> {
    sello_los().power_spec().sample(n, 7)
}

/// Typical excess-delay sample: `n` draws from the Sello LOS delay
/// distribution (loc 0).
pub fn delay_sample(n: usize) -> Vec<f64> {
    sello_los().delay_spec().sample(n, 11)
}

/// The Sello LOS statistics bundle.
pub fn sello_los() -> ChannelStatistics {
    presets::preset("Sello", Scenario::Los).expect("preset location")
}

/// The full synthetic campaign, one fixed seed.
pub fn campaign() -> MeasurementSet {
    fixtures::synthetic_campaign(1)
}

/// A spec matching the campaign power data, for scoring benchmarks.
pub fn power_spec() -> Result<DistributionSpec> {
    DistributionSpec::new(Family::LogNormal, -35.5, 17.4, vec![0.37])
}
