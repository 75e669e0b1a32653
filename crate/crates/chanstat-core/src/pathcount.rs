//! Number-of-paths statistics over distance bins.
//!
//! Links are bucketed into right-open distance bins [k w, (k+1) w)
//! anchored at 0 (default width 10 m), and each bin reports order
//! statistics of its per-link path counts. Quantiles use the type-1
//! (inverse-CDF) convention, q(p) = sorted[ceil(n p) - 1], so they are
//! always observed counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::LinkGroup;

/// Number of resolved paths of one link.
pub fn count_paths(group: &LinkGroup) -> usize {
    group.paths.len()
}

/// Path-count summary of one distance bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NopBin {
    pub lower_m: f64,
    pub upper_m: f64,
    pub link_count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Type-1 sample quantile of ascending `sorted` values.
fn quantile_type1(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let idx = ((n as f64 * p).ceil() as usize).clamp(1, n);
    sorted[idx - 1]
}

/// Buckets links by distance into right-open bins of `width_m` anchored at
/// 0 and summarizes each occupied bin; bins come back sorted by lower
/// bound, empty bins omitted.
pub fn bin_by_distance(groups: &[LinkGroup], width_m: f64) -> Result<Vec<NopBin>> {
    if !(width_m.is_finite() && width_m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bin width must be finite and positive, got {width_m}"
        )));
    }
    let mut by_bin: std::collections::BTreeMap<u64, Vec<f64>> = std::collections::BTreeMap::new();
    for group in groups {
        let k = (group.distance_m / width_m).floor() as u64;
        by_bin
            .entry(k)
            .or_default()
            .push(count_paths(group) as f64);
    }
    Ok(by_bin
        .into_iter()
        .map(|(k, mut counts)| {
            counts.sort_by(f64::total_cmp);
            NopBin {
                lower_m: k as f64 * width_m,
                upper_m: (k + 1) as f64 * width_m,
                link_count: counts.len(),
                min: counts[0],
                q1: quantile_type1(&counts, 0.25),
                median: quantile_type1(&counts, 0.5),
                q3: quantile_type1(&counts, 0.75),
                max: counts[counts.len() - 1],
            }
        })
        .collect())
}

/// The bin with the largest median path count; ties go to the smaller
/// lower bound. `None` on an empty table.
pub fn peak_bin(bins: &[NopBin]) -> Option<&NopBin> {
    bins.iter().reduce(|best, bin| {
        if bin.median > best.median {
            bin
        } else {
            best
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{MeasurementSet, PathRecord, Scenario};

    // Builds one link at `distance` with `nop` paths.
    fn link(id: &str, distance: f64, nop: usize) -> Vec<PathRecord> {
        (0..nop)
            .map(|i| PathRecord {
                location: "Sello".into(),
                link_id: id.into(),
                scenario: Scenario::Los,
                distance_m: distance,
                delay_ns: 30.0 + i as f64,
                power_db: -100.0 - i as f64,
                frequency_hz: 143.1e9,
            })
            .collect()
    }

    fn groups_of(links: &[(&str, f64, usize)]) -> Vec<LinkGroup> {
        let records: Vec<PathRecord> = links
            .iter()
            .flat_map(|&(id, d, n)| link(id, d, n))
            .collect();
        MeasurementSet::from_records(records, "test")
            .unwrap()
            .group_links()
    }

    #[test]
    fn worked_example_two_links_one_bin() {
        // Links at 12 m (4 paths) and 18 m (8 paths), width 10.
        let groups = groups_of(&[("A", 12.0, 4), ("B", 18.0, 8)]);
        let bins = bin_by_distance(&groups, 10.0).unwrap();
        assert_eq!(bins.len(), 1);
        let bin = &bins[0];
        assert_eq!(bin.lower_m, 10.0);
        assert_eq!(bin.upper_m, 20.0);
        assert_eq!(bin.link_count, 2);
        assert_eq!(bin.min, 4.0);
        assert_eq!(bin.q1, 4.0);
        assert_eq!(bin.median, 4.0);
        assert_eq!(bin.q3, 8.0);
        assert_eq!(bin.max, 8.0);
    }

    #[test]
    fn bins_are_right_open_and_anchored_at_zero() {
        // 10.0 belongs to [10, 20), 9.999... to [0, 10).
        let groups = groups_of(&[("A", 10.0, 3), ("B", 9.5, 5)]);
        let bins = bin_by_distance(&groups, 10.0).unwrap();
        assert_eq!(bins.len(), 2);
        assert_eq!(bins[0].lower_m, 0.0);
        assert_eq!(bins[0].max, 5.0);
        assert_eq!(bins[1].lower_m, 10.0);
        assert_eq!(bins[1].min, 3.0);

        // Halving the width halves bin spans.
        let narrow = bin_by_distance(&groups, 5.0).unwrap();
        assert_eq!(narrow[0].lower_m, 5.0);
        assert_eq!(narrow[0].upper_m, 10.0);
        assert_eq!(narrow[1].lower_m, 10.0);
        assert_eq!(narrow[1].upper_m, 15.0);

        assert!(bin_by_distance(&groups, 0.0).is_err());
        assert!(bin_by_distance(&groups, -1.0).is_err());
    }

    #[test]
    fn quantiles_follow_type1_convention() {
        // Five links in one bin with counts 1..5.
        let groups = groups_of(&[
            ("A", 1.0, 1),
            ("B", 2.0, 2),
            ("C", 3.0, 3),
            ("D", 4.0, 4),
            ("E", 5.0, 5),
        ]);
        let bins = bin_by_distance(&groups, 10.0).unwrap();
        let bin = &bins[0];
        assert_eq!(bin.link_count, 5);
        // ceil(5 * 0.25) = 2, ceil(5 * 0.5) = 3, ceil(5 * 0.75) = 4.
        assert_eq!(bin.q1, 2.0);
        assert_eq!(bin.median, 3.0);
        assert_eq!(bin.q3, 4.0);
    }

    #[test]
    fn peak_prefers_nearest_bin_on_ties() {
        let groups = groups_of(&[
            ("A", 5.0, 7),
            ("B", 15.0, 7),
            ("C", 25.0, 3),
        ]);
        let bins = bin_by_distance(&groups, 10.0).unwrap();
        let peak = peak_bin(&bins).unwrap();
        assert_eq!(peak.lower_m, 0.0, "tie must resolve to the nearer bin");
        assert_eq!(peak.median, 7.0);
        assert!(peak_bin(&[]).is_none());
    }

    #[test]
    fn empty_bins_are_omitted() {
        let groups = groups_of(&[("A", 2.0, 3), ("B", 45.0, 6)]);
        let bins = bin_by_distance(&groups, 10.0).unwrap();
        assert_eq!(bins.len(), 2);
        assert_eq!(bins[0].lower_m, 0.0);
        assert_eq!(bins[1].lower_m, 40.0);
    }
}
