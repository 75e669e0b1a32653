//! `ingest`: validate raw measurement CSV, write the canonical dataset and
//! the per-location path-count summary.

use serde::Serialize;

use crate::output::{report_path, write_atomic, write_rows};
use crate::IngestArgs;

#[derive(Debug, Serialize)]
struct CountRow {
    location: String,
    los: usize,
    nlos: usize,
}

pub fn run(args: &IngestArgs) -> anyhow::Result<i32> {
    let set = super::load_dataset(&args.input, &args.filter)?;

    // Canonical dataset: always CSV, that is the interchange format.
    let dataset_path = args.out.out.join("dataset.csv");
    write_atomic(&dataset_path, |w| {
        set.to_csv(w)?;
        Ok(())
    })?;

    let counts = set.summary_counts();
    let mut rows: Vec<CountRow> = counts
        .rows
        .iter()
        .map(|r| CountRow {
            location: r.location.clone(),
            los: r.los,
            nlos: r.nlos,
        })
        .collect();
    rows.push(CountRow {
        location: "total".to_string(),
        los: counts.total_los,
        nlos: counts.total_nlos,
    });
    let counts_path = report_path(&args.out.out, "counts", args.out.format);
    write_rows(&counts_path, args.out.format, &rows, &["location", "los", "nlos"])?;

    println!(
        "ingested {} paths ({} LOS, {} NLOS) -> {}",
        counts.total(),
        counts.total_los,
        counts.total_nlos,
        args.out.out.display()
    );
    Ok(0)
}
