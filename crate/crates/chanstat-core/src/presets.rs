//! Ready-made channel statistics for the four measured indoor sites.
//!
//! Power and delay parameters are the fitted campaign values for each
//! location/scenario cell (normalized power in dB relative to free space;
//! excess delay in ns with location pinned at 0). The path-count tables
//! are representative per-distance draw sets consistent with the campaign
//! observations; synthesis only needs plausible count variability per bin.

use crate::dist::{DistributionSpec, Family};
use crate::measurement::Scenario;
use crate::synthesis::{ChannelStatistics, NopBinSamples};

/// Canonical location names, alphabetical.
pub const LOCATIONS: [&str; 4] = ["Airport", "Sello", "TUAS", "TUAS2"];

fn spec(family: Family, loc: f64, scale: f64, shapes: &[f64]) -> DistributionSpec {
    DistributionSpec::new(family, loc, scale, shapes.to_vec())
        .expect("preset parameters are valid")
}

fn bin(lower_m: f64, counts: &[usize]) -> NopBinSamples {
    NopBinSamples {
        lower_m,
        upper_m: lower_m + 10.0,
        counts: counts.to_vec(),
    }
}

/// The preset statistics for one cell, or `None` for an unknown location.
/// Location names match case-insensitively.
pub fn preset(location: &str, scenario: Scenario) -> Option<ChannelStatistics> {
    let canonical = LOCATIONS
        .iter()
        .find(|l| l.eq_ignore_ascii_case(location))?;
    let (power, delay_scale, table): (DistributionSpec, f64, Vec<NopBinSamples>) =
        match (*canonical, scenario) {
            ("Sello", Scenario::Los) => (
                spec(Family::LogNormal, -35.5, 17.4, &[0.37]),
                50.52,
                vec![
                    bin(0.0, &[3, 4, 6]),
                    bin(10.0, &[6, 8, 11]),
                    bin(20.0, &[7, 9, 12]),
                    bin(30.0, &[4, 5, 7]),
                ],
            ),
            ("Sello", Scenario::Nlos) => (
                spec(Family::Exponential, -22.5, 5.31, &[]),
                43.51,
                vec![
                    bin(0.0, &[4, 5]),
                    bin(10.0, &[6, 8]),
                    bin(20.0, &[5, 7]),
                ],
            ),
            ("Airport", Scenario::Los) => (
                spec(Family::Gamma, -72.57, 0.94, &[59.7]),
                69.7,
                vec![
                    bin(0.0, &[5, 7]),
                    bin(10.0, &[8, 10, 12]),
                    bin(20.0, &[7, 9]),
                    bin(30.0, &[6, 8]),
                    bin(40.0, &[4, 6]),
                ],
            ),
            ("Airport", Scenario::Nlos) => (
                spec(Family::LogNormal, -30.97, 9.48, &[0.42]),
                81.21,
                vec![
                    bin(10.0, &[9, 12]),
                    bin(20.0, &[10, 13, 15]),
                    bin(30.0, &[8, 10]),
                ],
            ),
            ("TUAS", Scenario::Los) => (
                spec(Family::Gamma, -25.27, 5.04, &[1.36]),
                26.5,
                vec![
                    bin(0.0, &[2, 3]),
                    bin(10.0, &[3, 4, 5]),
                    bin(20.0, &[3, 4]),
                ],
            ),
            ("TUAS", Scenario::Nlos) => (
                spec(Family::LogLogistic, -46.11, 20.78, &[6.62]),
                63.2,
                vec![
                    bin(0.0, &[8, 10]),
                    bin(10.0, &[12, 15, 18]),
                    bin(20.0, &[10, 14]),
                    bin(30.0, &[8, 11]),
                ],
            ),
            ("TUAS2", Scenario::Los) => (
                spec(Family::LogLogistic, -33.79, 15.5, &[4.04]),
                37.5,
                vec![
                    bin(0.0, &[4, 5]),
                    bin(10.0, &[6, 7, 9]),
                    bin(20.0, &[5, 8]),
                    bin(30.0, &[4, 6]),
                ],
            ),
            ("TUAS2", Scenario::Nlos) => (
                spec(Family::LogLogistic, -47.4, 21.7, &[6.46]),
                55.7,
                vec![
                    bin(0.0, &[6, 8, 9]),
                    bin(10.0, &[12, 14, 16]),
                    bin(20.0, &[15, 18, 20]),
                    bin(30.0, &[8, 10, 12]),
                    bin(40.0, &[5, 7]),
                ],
            ),
            _ => unreachable!("every canonical location has both scenarios"),
        };
    let frequency_hz = match *canonical {
        "Sello" | "Airport" => 143.1e9,
        _ => 142.0e9,
    };
    let delay = spec(Family::Exponential, 0.0, delay_scale, &[]);
    Some(
        ChannelStatistics::new(
            canonical.to_string(),
            scenario,
            power,
            delay,
            table,
            frequency_hz,
        )
        .expect("preset tables satisfy the statistics invariants"),
    )
}

/// All eight presets (four locations, LOS and NLOS).
pub fn all() -> Vec<ChannelStatistics> {
    LOCATIONS
        .iter()
        .flat_map(|l| {
            [Scenario::Los, Scenario::Nlos]
                .into_iter()
                .map(|s| preset(l, s).expect("canonical locations are covered"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathcount::NopBin;

    #[test]
    fn all_presets_construct_and_cover_both_scenarios() {
        let presets = all();
        assert_eq!(presets.len(), 8);
        for stats in &presets {
            assert_eq!(stats.delay_spec().loc(), 0.0);
            assert!(stats.frequency_hz() > 100e9);
            assert!(!stats.nop_table().is_empty());
        }
    }

    #[test]
    fn lookup_is_case_insensitive_and_total() {
        assert!(preset("sello", Scenario::Los).is_some());
        assert!(preset("SELLO", Scenario::Nlos).is_some());
        assert!(preset("tuas2", Scenario::Nlos).is_some());
        assert!(preset("Mall", Scenario::Los).is_none());
    }

    #[test]
    fn sello_los_parameters() {
        let stats = preset("Sello", Scenario::Los).unwrap();
        let power = stats.power_spec();
        assert_eq!(power.family(), crate::dist::Family::LogNormal);
        assert_eq!(power.loc(), -35.5);
        assert_eq!(power.scale(), 17.4);
        assert_eq!(power.shapes(), &[0.37]);
        assert_eq!(stats.delay_spec().scale(), 50.52);
        assert_eq!(stats.frequency_hz(), 143.1e9);
    }

    #[test]
    fn preset_peaks_sit_in_the_mid_distance_bins() {
        // The characteristic path-count peak falls between 10 and 30 m.
        for (location, scenario) in [("Sello", Scenario::Los), ("TUAS2", Scenario::Nlos)] {
            let stats = preset(location, scenario).unwrap();
            let bins: Vec<NopBin> = stats
                .nop_table()
                .iter()
                .map(|b| {
                    let mut counts: Vec<f64> =
                        b.counts.iter().map(|&c| c as f64).collect();
                    counts.sort_by(f64::total_cmp);
                    let q = |p: f64| {
                        let idx =
                            ((counts.len() as f64 * p).ceil() as usize).clamp(1, counts.len());
                        counts[idx - 1]
                    };
                    NopBin {
                        lower_m: b.lower_m,
                        upper_m: b.upper_m,
                        link_count: counts.len(),
                        min: counts[0],
                        q1: q(0.25),
                        median: q(0.5),
                        q3: q(0.75),
                        max: counts[counts.len() - 1],
                    }
                })
                .collect();
            let peak = crate::pathcount::peak_bin(&bins).unwrap();
            assert!(
                peak.lower_m >= 10.0 && peak.upper_m <= 30.0,
                "{location} {scenario}: peak bin [{}, {})",
                peak.lower_m,
                peak.upper_m
            );
        }
    }
}
