//! `nop`: path-count tables per distance bin for each location and
//! scenario, plus the peak-median annotation across cells.

use anyhow::bail;
use serde::Serialize;

use chanstat_core::pathcount::{bin_by_distance, peak_bin, NopBin};
use chanstat_core::Scenario;

use crate::output::{report_path, write_rows};
use crate::NopArgs;

#[derive(Debug, Serialize)]
struct PeakRow {
    location: String,
    scenario: Scenario,
    lower_m: f64,
    upper_m: f64,
    link_count: usize,
    median: f64,
}

const BIN_HEADER: [&str; 8] = [
    "lower_m", "upper_m", "link_count", "min", "q1", "median", "q3", "max",
];

pub fn run(args: &NopArgs) -> anyhow::Result<i32> {
    let set = super::load_dataset(&args.input, &args.filter)?;
    if set.is_empty() {
        bail!("no records match the location/scenario selection");
    }

    let mut peaks = Vec::new();
    for (location, scenario) in super::cells(&set) {
        let cell = set.filter(Some(&location), Some(scenario));
        let groups = cell.group_links();
        let bins: Vec<NopBin> = bin_by_distance(&groups, args.bin_width)?;

        let stem = format!("nop_{}", super::cell_stem(&location, scenario));
        let path = report_path(&args.out.out, &stem, args.out.format);
        write_rows(&path, args.out.format, &bins, &BIN_HEADER)?;

        if let Some(peak) = peak_bin(&bins) {
            peaks.push(PeakRow {
                location: location.clone(),
                scenario,
                lower_m: peak.lower_m,
                upper_m: peak.upper_m,
                link_count: peak.link_count,
                median: peak.median,
            });
        }
    }

    let path = report_path(&args.out.out, "peaks", args.out.format);
    write_rows(
        &path,
        args.out.format,
        &peaks,
        &["location", "scenario", "lower_m", "upper_m", "link_count", "median"],
    )?;
    println!("wrote {} peak annotations -> {}", peaks.len(), path.display());
    Ok(0)
}
