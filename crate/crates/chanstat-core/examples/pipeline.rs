//! End-to-end tour of the library: synthesize a measurement campaign,
//! round-trip it through CSV, normalize, fit candidate distributions,
//! select the best, rebuild channel statistics, and score a synthetic
//! ensemble against them.
//!
//! Run with: cargo run -p chanstat-core --example pipeline

use chanstat_core::fixtures::synthetic_campaign;
use chanstat_core::gof;
use chanstat_core::measurement::parse_records;
use chanstat_core::normalize;
use chanstat_core::pathcount;
use chanstat_core::synthesis::{build_statistics, ensemble_summary, SelectionPolicy};
use chanstat_core::{fit_mle, Family, FitOptions, Scenario};

fn main() -> chanstat_core::Result<()> {
    // 1. A deterministic synthetic campaign, through a CSV round trip to
    //    prove the store parses what it writes.
    let campaign = synthetic_campaign(1);
    let csv = campaign.to_csv_string()?;
    let set = parse_records(csv.as_bytes(), "pipeline example")?;
    let counts = set.summary_counts();
    println!("campaign: {} paths over {} sites", counts.total(), counts.rows.len());
    for row in &counts.rows {
        println!("  {:<8} LOS {:>4}  NLOS {:>4}", row.location, row.los, row.nlos);
    }

    // 2. Pick one cell and normalize it.
    let cell = set.filter(Some("Sello"), Some(Scenario::Los));
    let groups = cell.group_links();
    let normalized = normalize::normalize_set(&cell)?;
    let powers: Vec<f64> = normalized.iter().map(|p| p.normalized_power_db).collect();
    let delays: Vec<f64> = normalized
        .iter()
        .map(|p| p.excess_delay_ns)
        .filter(|&t| t > 0.0)
        .collect();
    println!(
        "\nSello LOS: {} links, {} paths, {} positive excess delays",
        groups.len(),
        powers.len(),
        delays.len()
    );

    // 3. Path-count statistics by distance bin.
    let bins = pathcount::bin_by_distance(&groups, 10.0)?;
    println!("\npath counts per 10 m bin:");
    for bin in &bins {
        println!(
            "  [{:>3}, {:>3}) m  links {:>3}  median {:>5.1}",
            bin.lower_m, bin.upper_m, bin.link_count, bin.median
        );
    }

    // 4. Fit every candidate family and keep the scored reports.
    let options = FitOptions::default();
    let mut power_reports = Vec::new();
    for family in Family::POWER_SET {
        if let Ok(spec) = fit_mle(family, &powers, &options) {
            power_reports.push(gof::evaluate(&powers, &spec)?);
        }
    }
    let delay_options = FitOptions {
        fixed_loc: Some(0.0),
        ..FitOptions::default()
    };
    let mut delay_reports = Vec::new();
    for family in Family::DELAY_SET {
        if let Ok(spec) = fit_mle(family, &delays, &delay_options) {
            delay_reports.push(gof::evaluate(&delays, &spec)?);
        }
    }
    println!("\ncandidate fits (normalized power):");
    for report in &power_reports {
        println!(
            "  {:<12} p = {:>6.3}  Q-Q r = {:.4}",
            report.spec.family().to_string(),
            report.p_value,
            report.qq_r
        );
    }

    // 5. Select the best fits and rebuild the cell's statistics.
    let nop_table = bins
        .iter()
        .map(|b| chanstat_core::NopBinSamples {
            lower_m: b.lower_m,
            upper_m: b.upper_m,
            counts: groups
                .iter()
                .filter(|g| g.distance_m >= b.lower_m && g.distance_m < b.upper_m)
                .map(pathcount::count_paths)
                .collect(),
        })
        .collect();
    let stats = build_statistics(
        "Sello",
        Scenario::Los,
        &power_reports,
        &delay_reports,
        nop_table,
        143.1e9,
        &SelectionPolicy::default(),
    )?;
    println!(
        "\nselected: power = {} ({}), delay = {}",
        stats.power_spec().family(),
        stats.power_spec(),
        stats.delay_spec()
    );

    // 6. Draw an ensemble from the rebuilt statistics and score it.
    let pdps: Vec<_> = (0..200)
        .map(|i| stats.sample_pdp(12.0, 7_000 + i, None))
        .collect::<chanstat_core::Result<_>>()?;
    let summary = ensemble_summary(&stats, &pdps)?;
    println!(
        "\nensemble: {} realizations, {} taps, power KS p = {:.3}, delay KS p = {:.3}",
        summary.realizations,
        summary.total_taps,
        summary.power_ks_p.unwrap_or(f64::NAN),
        summary.delay_ks_p.unwrap_or(f64::NAN),
    );

    Ok(())
}
