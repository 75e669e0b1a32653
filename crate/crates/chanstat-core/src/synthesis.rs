//! Channel statistics containers and tap-delay-line PDP synthesis.
//!
//! A [`ChannelStatistics`] bundle holds everything needed to generate
//! synthetic power-delay profiles for one location/scenario cell: the
//! fitted normalized-power and excess-delay distributions, a per-distance
//! table of observed path counts, and the carrier frequency.
//!
//! Synthesis inverts the normalization pipeline: excess delays are drawn
//! from the delay spec and offset by the line-of-sight arrival, normalized
//! powers are drawn from the power spec and de-normalized by subtracting
//! the free-space budget, and phases are uniform on [0, 2 pi).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::gof::{self, GofReport};
use crate::measurement::Scenario;
use crate::normalize::{first_arrival_ns, fspl_db};
use crate::rng::Xoshiro256PlusPlus;

/// Observed per-link path counts for one distance bin; the synthesis draw
/// set for links in that range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NopBinSamples {
    pub lower_m: f64,
    pub upper_m: f64,
    pub counts: Vec<usize>,
}

/// Fitted statistics of one location/scenario cell.
///
/// Invariants (enforced at construction and deserialization): the delay
/// spec has location exactly 0 (excess delays start at the first arrival),
/// the frequency is positive, and the path-count table is non-empty with
/// ordered, non-overlapping bins and at least one positive count each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StatsRepr", into = "StatsRepr")]
pub struct ChannelStatistics {
    location: String,
    scenario: Scenario,
    power_spec: DistributionSpec,
    delay_spec: DistributionSpec,
    nop_table: Vec<NopBinSamples>,
    frequency_hz: f64,
}

#[derive(Serialize, Deserialize)]
struct StatsRepr {
    location: String,
    scenario: Scenario,
    power_spec: DistributionSpec,
    delay_spec: DistributionSpec,
    nop_table: Vec<NopBinSamples>,
    frequency_hz: f64,
}

impl TryFrom<StatsRepr> for ChannelStatistics {
    type Error = Error;
    fn try_from(r: StatsRepr) -> Result<Self> {
        ChannelStatistics::new(
            r.location,
            r.scenario,
            r.power_spec,
            r.delay_spec,
            r.nop_table,
            r.frequency_hz,
        )
    }
}

impl From<ChannelStatistics> for StatsRepr {
    fn from(s: ChannelStatistics) -> Self {
        StatsRepr {
            location: s.location,
            scenario: s.scenario,
            power_spec: s.power_spec,
            delay_spec: s.delay_spec,
            nop_table: s.nop_table,
            frequency_hz: s.frequency_hz,
        }
    }
}

impl ChannelStatistics {
    pub fn new(
        location: String,
        scenario: Scenario,
        power_spec: DistributionSpec,
        delay_spec: DistributionSpec,
        mut nop_table: Vec<NopBinSamples>,
        frequency_hz: f64,
    ) -> Result<Self> {
        if location.is_empty() {
            return Err(Error::InvalidArgument(
                "statistics location must not be empty".into(),
            ));
        }
        if delay_spec.loc() != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "excess-delay spec must have location 0, got {}",
                delay_spec.loc()
            )));
        }
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "carrier frequency must be finite and positive, got {frequency_hz}"
            )));
        }
        if nop_table.is_empty() {
            return Err(Error::InvalidArgument(
                "path-count table must not be empty".into(),
            ));
        }
        nop_table.sort_by(|a, b| a.lower_m.total_cmp(&b.lower_m));
        for bin in &nop_table {
            if !(bin.lower_m.is_finite() && bin.upper_m.is_finite())
                || bin.lower_m < 0.0
                || bin.lower_m >= bin.upper_m
            {
                return Err(Error::InvalidArgument(format!(
                    "bad path-count bin [{}, {})",
                    bin.lower_m, bin.upper_m
                )));
            }
            if bin.counts.is_empty() || bin.counts.contains(&0) {
                return Err(Error::InvalidArgument(format!(
                    "path-count bin [{}, {}) needs at least one positive count",
                    bin.lower_m, bin.upper_m
                )));
            }
        }
        for pair in nop_table.windows(2) {
            if pair[1].lower_m < pair[0].upper_m {
                return Err(Error::InvalidArgument(format!(
                    "path-count bins [{}, {}) and [{}, {}) overlap",
                    pair[0].lower_m, pair[0].upper_m, pair[1].lower_m, pair[1].upper_m
                )));
            }
        }
        Ok(Self {
            location,
            scenario,
            power_spec,
            delay_spec,
            nop_table,
            frequency_hz,
        })
    }

    pub fn location(&self) -> &str {
        &self.location
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn power_spec(&self) -> &DistributionSpec {
        &self.power_spec
    }

    pub fn delay_spec(&self) -> &DistributionSpec {
        &self.delay_spec
    }

    pub fn nop_table(&self) -> &[NopBinSamples] {
        &self.nop_table
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    /// The path-count bin covering `distance_m`, if any.
    pub fn coverage(&self, distance_m: f64) -> Option<&NopBinSamples> {
        self.nop_table
            .iter()
            .find(|b| distance_m >= b.lower_m && distance_m < b.upper_m)
    }

    /// Draws one synthetic PDP realization at `distance_m`.
    ///
    /// The tap count comes from the distance bin's observed counts unless
    /// `n_paths` overrides it; overriding is required outside the table's
    /// coverage. The first tap always sits at the line-of-sight arrival
    /// (excess delay 0); remaining excess delays are sorted ascending.
    ///
    /// Draw order on the seeded stream, for reproducibility: (1) the path
    /// count when taken from the table, (2) n-1 excess delays, (3) n
    /// normalized powers in tap order, (4) n phases in tap order.
    pub fn sample_pdp(
        &self,
        distance_m: f64,
        seed: u64,
        n_paths: Option<usize>,
    ) -> Result<PdpRealization> {
        if !(distance_m.is_finite() && distance_m > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "synthesis distance must be finite and positive, got {distance_m}"
            )));
        }
        let mut rng = Xoshiro256PlusPlus::new(seed);
        let n = match n_paths {
            Some(0) => {
                return Err(Error::InvalidArgument(
                    "a PDP needs at least one path".into(),
                ))
            }
            Some(n) => n,
            None => {
                let bin = self.coverage(distance_m).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "distance {distance_m} m is outside the path-count table; \
                         pass an explicit path count"
                    ))
                })?;
                bin.counts[(rng.next_u64() % bin.counts.len() as u64) as usize]
            }
        };

        let mut excess: Vec<f64> = (1..n)
            .map(|_| self.delay_spec.sample_one(&mut rng))
            .collect();
        excess.sort_by(f64::total_cmp);

        let fspl = fspl_db(distance_m, self.frequency_hz)?;
        let gains: Vec<f64> = (0..n)
            .map(|_| self.power_spec.sample_one(&mut rng) - fspl)
            .collect();
        let phases: Vec<f64> =
            (0..n).map(|_| 2.0 * std::f64::consts::PI * rng.next_f64()).collect();

        let first = first_arrival_ns(distance_m);
        let taps = (0..n)
            .map(|i| Tap {
                delay_ns: if i == 0 { first } else { first + excess[i - 1] },
                gain_db: gains[i],
                phase_rad: phases[i],
            })
            .collect();
        Ok(PdpRealization {
            distance_m,
            seed,
            taps,
        })
    }
}

/// One synthetic tap: absolute delay, gain, and phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tap {
    pub delay_ns: f64,
    pub gain_db: f64,
    pub phase_rad: f64,
}

/// One synthetic power-delay profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdpRealization {
    pub distance_m: f64,
    pub seed: u64,
    pub taps: Vec<Tap>,
}

/// One complex sample of a discretized channel impulse response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirBin {
    pub bin_index: u64,
    pub delay_ns: f64,
    pub re: f64,
    pub im: f64,
}

/// Discretizes a PDP onto the delay grid of a `bandwidth_hz` receiver
/// (bin spacing 1/bandwidth): taps falling in the same bin add coherently
/// as complex amplitudes. Only occupied bins are returned, sorted by
/// index.
pub fn pdp_to_cir(pdp: &PdpRealization, bandwidth_hz: f64) -> Result<Vec<CirBin>> {
    if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bandwidth must be finite and positive, got {bandwidth_hz}"
        )));
    }
    let dt_ns = 1e9 / bandwidth_hz;
    let mut bins: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for tap in &pdp.taps {
        let k = (tap.delay_ns / dt_ns).round() as u64;
        let amplitude = 10f64.powf(tap.gain_db / 20.0);
        let entry = bins.entry(k).or_insert((0.0, 0.0));
        entry.0 += amplitude * tap.phase_rad.cos();
        entry.1 += amplitude * tap.phase_rad.sin();
    }
    Ok(bins
        .into_iter()
        .map(|(k, (re, im))| CirBin {
            bin_index: k,
            delay_ns: k as f64 * dt_ns,
            re,
            im,
        })
        .collect())
}

/// Candidate filter for [`build_statistics`]: a fit is acceptable when its
/// Q-Q correlation reaches `min_qq_r`; among acceptable fits the highest
/// KS p-value wins (ties keep the earlier candidate).
#[derive(Debug, Clone)]
pub struct SelectionPolicy {
    pub min_qq_r: f64,
}

impl Default for SelectionPolicy {
    fn default() -> Self {
        Self { min_qq_r: 0.95 }
    }
}

fn select_best<'a>(
    reports: &'a [GofReport],
    policy: &SelectionPolicy,
    context: &str,
) -> Result<&'a GofReport> {
    let mut best: Option<&GofReport> = None;
    for report in reports.iter().filter(|r| r.qq_r >= policy.min_qq_r) {
        // Strict comparison keeps the earlier candidate on ties.
        if best.map_or(true, |b| report.p_value > b.p_value) {
            best = Some(report);
        }
    }
    best.ok_or_else(|| {
        let candidates = if reports.is_empty() {
            "none".to_string()
        } else {
            reports
                .iter()
                .map(|r| {
                    format!(
                        "{}(p={:.3}, R={:.3})",
                        r.spec.family(),
                        r.p_value,
                        r.qq_r
                    )
                })
                .collect::<Vec<_>>()
                .join(", ")
        };
        Error::NoAcceptableFit {
            context: context.to_string(),
            candidates,
        }
    })
}

/// Assembles a cell's statistics from scored candidate fits: the power and
/// delay specs are the best acceptable candidates under `policy`.
pub fn build_statistics(
    location: &str,
    scenario: Scenario,
    power_reports: &[GofReport],
    delay_reports: &[GofReport],
    nop_table: Vec<NopBinSamples>,
    frequency_hz: f64,
    policy: &SelectionPolicy,
) -> Result<ChannelStatistics> {
    let power = select_best(power_reports, policy, &format!("{location} {scenario} power"))?;
    let delay = select_best(delay_reports, policy, &format!("{location} {scenario} delay"))?;
    ChannelStatistics::new(
        location.to_string(),
        scenario,
        power.spec.clone(),
        delay.spec.clone(),
        nop_table,
        frequency_hz,
    )
}

/// Pooled checks of a synthetic ensemble against its source statistics.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSummary {
    pub realizations: usize,
    pub total_taps: usize,
    /// Mean pooled excess delay. The forced zero-excess first tap of each
    /// realization is excluded, mirroring how the delay spec was fitted.
    pub mean_excess_delay_ns: Option<f64>,
    /// KS p-value of the pooled excess delays against the delay spec.
    pub delay_ks_p: Option<f64>,
    /// Mean pooled normalized power (gain + FSPL), all taps.
    pub mean_normalized_power_db: Option<f64>,
    /// KS p-value of the pooled normalized powers against the power spec.
    pub power_ks_p: Option<f64>,
}

/// Summarizes an ensemble of realizations drawn from `stats`.
pub fn ensemble_summary(
    stats: &ChannelStatistics,
    pdps: &[PdpRealization],
) -> Result<EnsembleSummary> {
    let mut excess = Vec::new();
    let mut powers = Vec::new();
    for pdp in pdps {
        if pdp.taps.is_empty() {
            return Err(Error::InvalidArgument(
                "ensemble contains a realization with no taps".into(),
            ));
        }
        let fspl = fspl_db(pdp.distance_m, stats.frequency_hz)?;
        let first = pdp.taps[0].delay_ns;
        for (i, tap) in pdp.taps.iter().enumerate() {
            powers.push(tap.gain_db + fspl);
            if i > 0 {
                excess.push(tap.delay_ns - first);
            }
        }
    }

    let mean = |v: &[f64]| -> Option<f64> {
        if v.is_empty() {
            None
        } else {
            Some(v.iter().sum::<f64>() / v.len() as f64)
        }
    };
    let ks_p = |v: &[f64], spec: &DistributionSpec| -> Result<Option<f64>> {
        if v.len() < 2 {
            return Ok(None);
        }
        let d = gof::ks_statistic(v, spec)?;
        Ok(Some(gof::ks_pvalue(d, v.len())?))
    };

    Ok(EnsembleSummary {
        realizations: pdps.len(),
        total_taps: powers.len(),
        mean_excess_delay_ns: mean(&excess),
        delay_ks_p: ks_p(&excess, &stats.delay_spec)?,
        mean_normalized_power_db: mean(&powers),
        power_ks_p: ks_p(&powers, &stats.power_spec)?,
    })
}
