pub mod fit;
pub mod ingest;
pub mod nop;
pub mod synth;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::Context;

use chanstat_core::measurement::parse_records;
use chanstat_core::{MeasurementSet, Scenario};

use crate::FilterArgs;

/// Loads and filters a measurement CSV, naming the file in diagnostics.
pub fn load_dataset(input: &Path, filter: &FilterArgs) -> anyhow::Result<MeasurementSet> {
    let file =
        File::open(input).with_context(|| format!("opening {}", input.display()))?;
    let set = parse_records(BufReader::new(file), &input.display().to_string())
        .with_context(|| format!("parsing {}", input.display()))?;
    Ok(set.filter(filter.location.as_deref(), filter.scenario))
}

/// Distinct (location, scenario) cells of a dataset in a stable order:
/// locations alphabetically, LOS before NLOS.
pub fn cells(set: &MeasurementSet) -> Vec<(String, Scenario)> {
    let mut cells: Vec<(String, Scenario)> = Vec::new();
    for record in set.records() {
        let cell = (record.location.clone(), record.scenario);
        if !cells.contains(&cell) {
            cells.push(cell);
        }
    }
    cells.sort_by(|a, b| (a.0.as_str(), a.1.name()).cmp(&(b.0.as_str(), b.1.name())));
    cells
}

/// Lowercased `<location>_<scenario>` fragment for per-cell file names.
pub fn cell_stem(location: &str, scenario: Scenario) -> String {
    format!(
        "{}_{}",
        location.to_lowercase(),
        scenario.name().to_lowercase()
    )
}
