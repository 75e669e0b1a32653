//! Distance and delay normalization.
//!
//! Measured path gains are compared against the free-space budget of their
//! link: with FSPL(d, f) = 20 log10(4 pi f d / c), the normalized power is
//! Pn = P + FSPL, so a pure free-space path sits at exactly 0 dB and
//! everything weaker is negative. Delays are re-based per link to the
//! first arrival, making the leading tap's excess delay exactly 0.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{LinkGroup, MeasurementSet, PathRecord, Scenario};
use crate::numfmt::format_sig;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space path loss in dB at distance `d_m` and carrier `f_hz`.
pub fn fspl_db(d_m: f64, f_hz: f64) -> Result<f64> {
    if !(d_m.is_finite() && d_m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "FSPL distance must be finite and positive, got {d_m}"
        )));
    }
    if !(f_hz.is_finite() && f_hz > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "FSPL frequency must be finite and positive, got {f_hz}"
        )));
    }
    Ok(20.0 * (4.0 * std::f64::consts::PI * f_hz * d_m / SPEED_OF_LIGHT).log10())
}

/// Line-of-sight propagation delay in ns over `d_m` meters.
pub fn first_arrival_ns(d_m: f64) -> f64 {
    d_m / SPEED_OF_LIGHT * 1e9
}

/// One path after normalization, with the link metadata carried along.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPath {
    pub excess_delay_ns: f64,
    pub normalized_power_db: f64,
    pub location: String,
    pub link_id: String,
    pub scenario: Scenario,
    pub distance_m: f64,
    pub frequency_hz: f64,
}

/// Normalized power of a single record: P + FSPL(d, f).
pub fn normalize_power(record: &PathRecord) -> Result<f64> {
    Ok(record.power_db + fspl_db(record.distance_m, record.frequency_hz)?)
}

/// Normalizes one link: delays re-based to the link's first arrival,
/// powers re-based to the link's free-space budget. Output order follows
/// the group's delay-sorted paths, so the first entry has excess delay 0.
pub fn normalize_link(group: &LinkGroup) -> Result<Vec<NormalizedPath>> {
    if group.paths.is_empty() {
        return Err(Error::EmptyData("normalize_link"));
    }
    let fspl = fspl_db(group.distance_m, group.frequency_hz)?;
    let first = group.paths[0].delay_ns;
    Ok(group
        .paths
        .iter()
        .map(|p| NormalizedPath {
            excess_delay_ns: p.delay_ns - first,
            normalized_power_db: p.power_db + fspl,
            location: p.location.clone(),
            link_id: p.link_id.clone(),
            scenario: p.scenario,
            distance_m: p.distance_m,
            frequency_hz: p.frequency_hz,
        })
        .collect())
}

/// Normalizes every link of a set; output follows link grouping order.
pub fn normalize_set(set: &MeasurementSet) -> Result<Vec<NormalizedPath>> {
    let mut out = Vec::with_capacity(set.len());
    for group in set.group_links() {
        out.extend(normalize_link(&group)?);
    }
    Ok(out)
}

/// Power-delay profile points of one link: (measured delay ns, normalized
/// power dB), sorted by delay. Delays stay absolute here; the excess-delay
/// re-basing is for distribution fitting, while a PDP plot keeps the
/// propagation offset visible.
pub fn pdp_points(group: &LinkGroup) -> Result<Vec<(f64, f64)>> {
    if group.paths.is_empty() {
        return Err(Error::EmptyData("pdp_points"));
    }
    let fspl = fspl_db(group.distance_m, group.frequency_hz)?;
    Ok(group
        .paths
        .iter()
        .map(|p| (p.delay_ns, p.power_db + fspl))
        .collect())
}

/// Writes PDP points as `delay_ns,power_norm_db,scenario` rows with nine
/// significant digits.
pub fn write_pdp_csv<W: Write>(
    points: &[(f64, f64)],
    scenario: Scenario,
    writer: W,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["delay_ns", "power_norm_db", "scenario"])?;
    for &(delay, power) in points {
        wtr.write_record([
            format_sig(delay, 9).as_str(),
            format_sig(power, 9).as_str(),
            scenario.name(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
