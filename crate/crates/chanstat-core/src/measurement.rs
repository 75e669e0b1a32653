//! Measurement storage: the canonical per-path record, CSV ingestion with
//! line-accurate diagnostics, link grouping, and summary counts.
//!
//! Converting raw sounder archives into this schema is campaign-specific
//! plumbing; external tooling is expected to emit the canonical CSV and
//! hand it to [`parse_records`], or to build [`PathRecord`] values directly
//! and call [`MeasurementSet::from_records`]. Both entry points enforce the
//! same invariants, so every `MeasurementSet` in the pipeline is known
//! valid by construction.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfmt::format_sig;

/// CSV column order for the canonical schema.
pub const CSV_HEADER: [&str; 7] = [
    "location",
    "link_id",
    "scenario",
    "distance_m",
    "delay_ns",
    "power_db",
    "frequency_hz",
];

/// Line-of-sight condition of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Scenario {
    Los,
    Nlos,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Los => "LOS",
            Scenario::Nlos => "NLOS",
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "LOS" => Ok(Scenario::Los),
            "NLOS" => Ok(Scenario::Nlos),
            _ => Err(Error::InvalidField {
                field: "scenario",
                message: format!("expected LOS or NLOS, got '{s}'"),
            }),
        }
    }
}

/// One resolved multipath component.
///
/// `power_db` is a gain (receive relative to transmit), so it is
/// non-positive; `delay_ns` is the absolute propagation delay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub location: String,
    pub link_id: String,
    pub scenario: Scenario,
    pub distance_m: f64,
    pub delay_ns: f64,
    pub power_db: f64,
    pub frequency_hz: f64,
}

impl PathRecord {
    /// Checks the per-field invariants, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &'static str, message: String| Err(Error::InvalidField { field, message });
        if self.location.is_empty() {
            return bad("location", "must not be empty".into());
        }
        if self.link_id.is_empty() {
            return bad("link_id", "must not be empty".into());
        }
        if !(self.distance_m.is_finite() && self.distance_m > 0.0) {
            return bad(
                "distance_m",
                format!("must be finite and positive, got {}", self.distance_m),
            );
        }
        if !(self.delay_ns.is_finite() && self.delay_ns > 0.0) {
            return bad(
                "delay_ns",
                format!("must be finite and positive, got {}", self.delay_ns),
            );
        }
        if !(self.power_db.is_finite() && self.power_db <= 0.0) {
            return bad(
                "power_db",
                format!(
                    "must be a finite non-positive gain, got {}",
                    self.power_db
                ),
            );
        }
        if !(self.frequency_hz.is_finite() && self.frequency_hz > 0.0) {
            return bad(
                "frequency_hz",
                format!("must be finite and positive, got {}", self.frequency_hz),
            );
        }
        Ok(())
    }

    /// Bitwise identity key used for duplicate rejection.
    fn key(&self) -> (String, String, Scenario, u64, u64, u64, u64) {
        (
            self.location.clone(),
            self.link_id.clone(),
            self.scenario,
            self.distance_m.to_bits(),
            self.delay_ns.to_bits(),
            self.power_db.to_bits(),
            self.frequency_hz.to_bits(),
        )
    }
}

/// Per-link metadata snapshot used for consistency checks.
#[derive(Clone, PartialEq)]
struct LinkMeta {
    location: String,
    scenario: Scenario,
    distance_bits: u64,
    frequency_bits: u64,
}

impl LinkMeta {
    fn of(r: &PathRecord) -> Self {
        Self {
            location: r.location.clone(),
            scenario: r.scenario,
            distance_bits: r.distance_m.to_bits(),
            frequency_bits: r.frequency_hz.to_bits(),
        }
    }

    /// Human-readable description of the first field that differs.
    fn diff(&self, other: &LinkMeta) -> Option<String> {
        if self.location != other.location {
            return Some(format!(
                "location '{}' conflicts with '{}'",
                other.location, self.location
            ));
        }
        if self.scenario != other.scenario {
            return Some(format!(
                "scenario {} conflicts with {}",
                other.scenario, self.scenario
            ));
        }
        if self.distance_bits != other.distance_bits {
            return Some(format!(
                "distance {} conflicts with {}",
                f64::from_bits(other.distance_bits),
                f64::from_bits(self.distance_bits)
            ));
        }
        if self.frequency_bits != other.frequency_bits {
            return Some(format!(
                "frequency {} conflicts with {}",
                f64::from_bits(other.frequency_bits),
                f64::from_bits(self.frequency_bits)
            ));
        }
        None
    }
}

/// A validated collection of path records plus a provenance note.
///
/// Invariants established at construction: every record passes
/// [`PathRecord::validate`], no two records are bit-identical, and all
/// records of a link agree on location, scenario, distance and frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSet {
    records: Vec<PathRecord>,
    provenance: String,
}

/// All paths of one link, sorted by delay.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkGroup {
    pub link_id: String,
    pub location: String,
    pub scenario: Scenario,
    pub distance_m: f64,
    pub frequency_hz: f64,
    /// Paths sorted by ascending delay (ties keep input order).
    pub paths: Vec<PathRecord>,
}

/// LOS/NLOS path counts per location plus campaign totals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryCounts {
    pub rows: Vec<LocationCounts>,
    pub total_los: usize,
    pub total_nlos: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocationCounts {
    pub location: String,
    pub los: usize,
    pub nlos: usize,
}

impl SummaryCounts {
    pub fn total(&self) -> usize {
        self.total_los + self.total_nlos
    }
}

/// Parses the canonical CSV schema. Errors carry the 1-based file line
/// (the header is line 1) and name the offending column.
pub fn parse_records<R: Read>(reader: R, provenance: &str) -> Result<MeasurementSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut links: HashMap<String, (u64, LinkMeta)> = HashMap::new();

    for (index, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(index as u64 + 1, |p| p.line());
            Error::Parse {
                line,
                message: format!("malformed CSV: {e}"),
            }
        })?;
        let line = row.position().map_or(index as u64 + 1, |p| p.line());
        let parse_err = |message: String| Error::Parse { line, message };

        if index == 0 {
            let got: Vec<&str> = row.iter().collect();
            if got != CSV_HEADER {
                return Err(parse_err(format!(
                    "expected header '{}', got '{}'",
                    CSV_HEADER.join(","),
                    got.join(",")
                )));
            }
            continue;
        }
        if row.len() != CSV_HEADER.len() {
            return Err(parse_err(format!(
                "expected {} columns, found {}",
                CSV_HEADER.len(),
                row.len()
            )));
        }

        let number = |field: &'static str, raw: &str| -> Result<f64> {
            raw.trim()
                .parse::<f64>()
                .map_err(|_| parse_err(format!("{field}: cannot parse '{raw}' as a number")))
        };
        let record = PathRecord {
            location: row[0].to_string(),
            link_id: row[1].to_string(),
            scenario: row[2]
                .parse::<Scenario>()
                .map_err(|e| parse_err(e.to_string()))?,
            distance_m: number("distance_m", &row[3])?,
            delay_ns: number("delay_ns", &row[4])?,
            power_db: number("power_db", &row[5])?,
            frequency_hz: number("frequency_hz", &row[6])?,
        };
        record
            .validate()
            .map_err(|e| parse_err(e.to_string()))?;

        if !seen.insert(record.key()) {
            return Err(Error::DuplicateRecord { line });
        }
        let meta = LinkMeta::of(&record);
        match links.entry(record.link_id.clone()) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert((line, meta));
            }
            std::collections::hash_map::Entry::Occupied(o) => {
                let (first_line, first) = o.get();
                if let Some(diff) = first.diff(&meta) {
                    return Err(parse_err(format!(
                        "link '{}': {diff} (first seen at line {first_line})",
                        record.link_id
                    )));
                }
            }
        }
        records.push(record);
    }

    Ok(MeasurementSet {
        records,
        provenance: provenance.to_string(),
    })
}

impl MeasurementSet {
    /// Builds a set from in-memory records, enforcing the same invariants
    /// as CSV parsing.
    pub fn from_records(records: Vec<PathRecord>, provenance: &str) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut links: HashMap<String, LinkMeta> = HashMap::new();
        for (i, record) in records.iter().enumerate() {
            record.validate()?;
            if !seen.insert(record.key()) {
                return Err(Error::InvalidArgument(format!(
                    "record {i} duplicates an earlier record (link '{}', delay {} ns)",
                    record.link_id, record.delay_ns
                )));
            }
            let meta = LinkMeta::of(record);
            match links.entry(record.link_id.clone()) {
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(meta);
                }
                std::collections::hash_map::Entry::Occupied(o) => {
                    if let Some(diff) = o.get().diff(&meta) {
                        return Err(Error::InconsistentLink {
                            link_id: record.link_id.clone(),
                            message: diff,
                        });
                    }
                }
            }
        }
        Ok(Self {
            records,
            provenance: provenance.to_string(),
        })
    }

    pub fn records(&self) -> &[PathRecord] {
        &self.records
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Subset by location and/or scenario (both filters optional; location
    /// matches case-insensitively). Provenance is carried over.
    pub fn filter(&self, location: Option<&str>, scenario: Option<Scenario>) -> MeasurementSet {
        let records = self
            .records
            .iter()
            .filter(|r| {
                location.map_or(true, |l| r.location.eq_ignore_ascii_case(l))
                    && scenario.map_or(true, |s| r.scenario == s)
            })
            .cloned()
            .collect();
        MeasurementSet {
            records,
            provenance: self.provenance.clone(),
        }
    }

    /// Partitions into per-link groups with paths sorted by delay. Link
    /// metadata consistency is a construction invariant, so this cannot
    /// fail; groups appear in first-record order.
    pub fn group_links(&self) -> Vec<LinkGroup> {
        let mut order: Vec<String> = Vec::new();
        let mut by_link: HashMap<String, Vec<PathRecord>> = HashMap::new();
        for record in &self.records {
            let entry = by_link.entry(record.link_id.clone()).or_default();
            if entry.is_empty() {
                order.push(record.link_id.clone());
            }
            entry.push(record.clone());
        }
        order
            .into_iter()
            .map(|link_id| {
                let mut paths = by_link.remove(&link_id).expect("link was inserted above");
                paths.sort_by(|a, b| a.delay_ns.total_cmp(&b.delay_ns));
                let first = &paths[0];
                LinkGroup {
                    link_id,
                    location: first.location.clone(),
                    scenario: first.scenario,
                    distance_m: first.distance_m,
                    frequency_hz: first.frequency_hz,
                    paths,
                }
            })
            .collect()
    }

    /// Per-location LOS/NLOS path counts; rows sorted by location name.
    /// The row sums always partition the set total.
    pub fn summary_counts(&self) -> SummaryCounts {
        let mut by_location: HashMap<&str, (usize, usize)> = HashMap::new();
        for r in &self.records {
            let counts = by_location.entry(&r.location).or_default();
            match r.scenario {
                Scenario::Los => counts.0 += 1,
                Scenario::Nlos => counts.1 += 1,
            }
        }
        let mut rows: Vec<LocationCounts> = by_location
            .into_iter()
            .map(|(location, (los, nlos))| LocationCounts {
                location: location.to_string(),
                los,
                nlos,
            })
            .collect();
        rows.sort_by(|a, b| a.location.cmp(&b.location));
        let total_los = rows.iter().map(|r| r.los).sum();
        let total_nlos = rows.iter().map(|r| r.nlos).sum();
        SummaryCounts {
            rows,
            total_los,
            total_nlos,
        }
    }

    /// Writes the canonical CSV with nine significant digits per numeric
    /// field. Parsing the output reproduces this set (up to the digit
    /// rounding), and re-serializing the parsed set is byte-identical.
    pub fn to_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(CSV_HEADER)?;
        for r in &self.records {
            wtr.write_record([
                r.location.as_str(),
                r.link_id.as_str(),
                r.scenario.name(),
                &format_sig(r.distance_m, 9),
                &format_sig(r.delay_ns, 9),
                &format_sig(r.power_db, 9),
                &format_sig(r.frequency_hz, 9),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.to_csv(&mut buf)?;
        String::from_utf8(buf)
            .map_err(|e| Error::InvalidArgument(format!("CSV output was not UTF-8: {e}")))
    }
}
