//! `synth`: draw synthetic power-delay profiles from channel statistics
//! and score the pooled ensemble against its generating distributions.

use std::fs::File;
use std::io::BufReader;

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::Serialize;

use chanstat_core::synthesis::{ensemble_summary, ChannelStatistics};
use chanstat_core::{presets, PdpRealization, Xoshiro256PlusPlus};

use crate::output::{report_path, write_atomic, write_rows, Format};
use crate::SynthArgs;

/// One tap as a flat CSV row.
#[derive(Debug, Serialize)]
struct TapRow {
    realization: usize,
    seed: u64,
    distance_m: f64,
    tap: usize,
    delay_ns: f64,
    gain_db: f64,
    phase_rad: f64,
}

pub fn run(args: &SynthArgs) -> anyhow::Result<i32> {
    let stats = load_statistics(args)?;

    // Realization i draws on its own stream derived from (seed, i), so the
    // ensemble is reproducible and order-independent.
    let seeds: Vec<u64> = (0..args.count)
        .map(|i| Xoshiro256PlusPlus::derive(args.seed, i as u64).next_u64())
        .collect();
    let pdps: Vec<PdpRealization> = seeds
        .par_iter()
        .map(|&seed| stats.sample_pdp(args.distance, seed, None))
        .collect::<chanstat_core::Result<_>>()
        .with_context(|| {
            format!(
                "synthesizing {} realizations at {} m for {} {}",
                args.count,
                args.distance,
                stats.location(),
                stats.scenario()
            )
        })?;

    let realizations_path = report_path(&args.out.out, "realizations", args.out.format);
    match args.out.format {
        Format::Json => write_atomic(&realizations_path, |w| {
            // Compact JSON: ensembles can run to tens of thousands of
            // realizations.
            serde_json::to_writer(&mut *w, &pdps)?;
            w.write_all(b"\n")?;
            Ok(())
        })?,
        Format::Csv => {
            let rows: Vec<TapRow> = pdps
                .iter()
                .enumerate()
                .flat_map(|(i, pdp)| {
                    pdp.taps.iter().enumerate().map(move |(t, tap)| TapRow {
                        realization: i,
                        seed: pdp.seed,
                        distance_m: pdp.distance_m,
                        tap: t,
                        delay_ns: tap.delay_ns,
                        gain_db: tap.gain_db,
                        phase_rad: tap.phase_rad,
                    })
                })
                .collect();
            write_rows(
                &realizations_path,
                args.out.format,
                &rows,
                &[
                    "realization", "seed", "distance_m", "tap", "delay_ns", "gain_db",
                    "phase_rad",
                ],
            )?;
        }
    }

    let summary = ensemble_summary(&stats, &pdps)?;
    let summary_path = report_path(&args.out.out, "ensemble", args.out.format);
    write_rows(
        &summary_path,
        args.out.format,
        std::slice::from_ref(&summary),
        &[
            "realizations", "total_taps", "mean_excess_delay_ns", "delay_ks_p",
            "mean_normalized_power_db", "power_ks_p",
        ],
    )?;

    println!(
        "synthesized {} realizations ({} taps) -> {}",
        summary.realizations,
        summary.total_taps,
        args.out.out.display()
    );
    Ok(0)
}

/// Statistics come from `--input` (a statistics JSON, typically produced
/// by an earlier fitting run) or fall back to the built-in set for the
/// requested cell.
fn load_statistics(args: &SynthArgs) -> anyhow::Result<ChannelStatistics> {
    if let Some(path) = &args.input {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let stats: ChannelStatistics = serde_json::from_reader(BufReader::new(file))
            .with_context(|| format!("parsing statistics from {}", path.display()))?;
        return Ok(stats);
    }
    match presets::preset(&args.location, args.scenario) {
        Some(stats) => Ok(stats),
        None => bail!(
            "no built-in statistics for {} {}; known locations: {}",
            args.location,
            args.scenario,
            presets::LOCATIONS.join(", ")
        ),
    }
}
