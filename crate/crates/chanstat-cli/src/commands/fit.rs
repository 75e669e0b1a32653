//! `fit` and `gof`: per-cell distribution fitting on normalized powers and
//! excess delays.
//!
//! Both commands run the same fits; `fit` reports every candidate row,
//! `gof` additionally reports which candidate each cell selects under the
//! acceptance policy (Q-Q correlation at least 0.95, then highest KS
//! p-value, ties keeping the earlier candidate).

use std::sync::Arc;

use anyhow::bail;
use rayon::prelude::*;
use serde::Serialize;

use chanstat_core::gof::{evaluate, GofReport};
use chanstat_core::normalize::normalize_set;
use chanstat_core::numfmt::round_sig;
use chanstat_core::report::{FitRow, Quantity};
use chanstat_core::{fit_mle, Family, FitOptions, Scenario};

use crate::output::{report_path, write_rows};
use crate::FitArgs;

pub enum Mode {
    Fit,
    Gof,
}

/// Minimum Q-Q correlation for a candidate to be selectable.
const MIN_QQ_R: f64 = 0.95;

struct Job {
    location: String,
    scenario: Scenario,
    quantity: Quantity,
    family: Family,
    data: Arc<Vec<f64>>,
    options: FitOptions,
}

struct Outcome {
    location: String,
    scenario: Scenario,
    quantity: Quantity,
    family: Family,
    n: usize,
    result: chanstat_core::Result<GofReport>,
}

#[derive(Debug, Serialize)]
struct SelectionRow {
    location: String,
    scenario: Scenario,
    quantity: Quantity,
    family: Option<Family>,
    p_value: Option<f64>,
    qq_r: Option<f64>,
    status: String,
}

pub fn run(args: &FitArgs, mode: Mode) -> anyhow::Result<i32> {
    let set = super::load_dataset(&args.input, &args.filter)?;

    let requested: &[Family] = if args.families.is_empty() {
        &Family::ALL
    } else {
        &args.families
    };
    let power_families: Vec<Family> = Family::POWER_SET
        .into_iter()
        .filter(|f| requested.contains(f))
        .collect();
    let delay_families: Vec<Family> = Family::DELAY_SET
        .into_iter()
        .filter(|f| requested.contains(f))
        .collect();
    if power_families.is_empty() && delay_families.is_empty() {
        bail!("none of the requested families applies to powers or delays");
    }

    let power_options = FitOptions {
        seed: args.seed,
        ..FitOptions::default()
    };
    let delay_options = FitOptions {
        fixed_loc: args.fix_loc.then_some(0.0),
        seed: args.seed,
        ..FitOptions::default()
    };

    let mut jobs = Vec::new();
    for (location, scenario) in super::cells(&set) {
        let cell = set.filter(Some(&location), Some(scenario));
        let normalized = normalize_set(&cell)?;
        let powers: Arc<Vec<f64>> =
            Arc::new(normalized.iter().map(|p| p.normalized_power_db).collect());
        // Excess delays: the forced zero of each link's first arrival is
        // not part of the fitted quantity.
        let delays: Arc<Vec<f64>> = Arc::new(
            normalized
                .iter()
                .map(|p| p.excess_delay_ns)
                .filter(|&t| t > 0.0)
                .collect(),
        );
        for &family in &power_families {
            jobs.push(Job {
                location: location.clone(),
                scenario,
                quantity: Quantity::Power,
                family,
                data: powers.clone(),
                options: power_options.clone(),
            });
        }
        for &family in &delay_families {
            jobs.push(Job {
                location: location.clone(),
                scenario,
                quantity: Quantity::Delay,
                family,
                data: delays.clone(),
                options: delay_options.clone(),
            });
        }
    }

    let outcomes: Vec<Outcome> = jobs
        .par_iter()
        .map(|job| Outcome {
            location: job.location.clone(),
            scenario: job.scenario,
            quantity: job.quantity,
            family: job.family,
            n: job.data.len(),
            result: fit_mle(job.family, &job.data, &job.options)
                .and_then(|spec| evaluate(&job.data, &spec)),
        })
        .collect();

    let rows: Vec<FitRow> = outcomes
        .iter()
        .map(|o| match &o.result {
            Ok(report) => FitRow::from_report(&o.location, o.scenario, o.quantity, report),
            Err(error) => {
                FitRow::failed(&o.location, o.scenario, o.quantity, o.family, o.n, error)
            }
        })
        .collect();

    let stem = match mode {
        Mode::Fit => "fits",
        Mode::Gof => "gof",
    };
    let path = report_path(&args.out.out, stem, args.out.format);
    write_rows(
        &path,
        args.out.format,
        &rows,
        &[
            "location", "scenario", "quantity", "family", "p_value", "qq_r", "loc", "scale",
            "shape1", "shape2", "ks_d", "n", "status",
        ],
    )?;

    let failures = rows.iter().filter(|r| !r.is_ok()).count();
    println!(
        "fitted {} rows ({} failed) -> {}",
        rows.len(),
        failures,
        path.display()
    );

    let mut clean = failures == 0;
    if let Mode::Gof = mode {
        let selections = select(&outcomes);
        let unselected = selections.iter().filter(|s| s.family.is_none()).count();
        let path = report_path(&args.out.out, "selection", args.out.format);
        write_rows(
            &path,
            args.out.format,
            &selections,
            &[
                "location", "scenario", "quantity", "family", "p_value", "qq_r", "status",
            ],
        )?;
        println!(
            "selected {} of {} cell quantities -> {}",
            selections.len() - unselected,
            selections.len(),
            path.display()
        );
        clean = clean && unselected == 0;
    }

    Ok(if clean { 0 } else { 1 })
}

/// Best acceptable candidate per (location, scenario, quantity), in
/// outcome order.
fn select(outcomes: &[Outcome]) -> Vec<SelectionRow> {
    let mut keys: Vec<(String, Scenario, Quantity)> = Vec::new();
    for o in outcomes {
        let key = (o.location.clone(), o.scenario, o.quantity);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }

    keys.into_iter()
        .map(|(location, scenario, quantity)| {
            let candidates: Vec<&GofReport> = outcomes
                .iter()
                .filter(|o| {
                    o.location == location && o.scenario == scenario && o.quantity == quantity
                })
                .filter_map(|o| o.result.as_ref().ok())
                .collect();
            let mut best: Option<&GofReport> = None;
            for report in candidates.iter().filter(|r| r.qq_r >= MIN_QQ_R) {
                // Strict comparison keeps the earlier candidate on ties.
                if best.map_or(true, |b| report.p_value > b.p_value) {
                    best = Some(report);
                }
            }
            match best {
                Some(report) => SelectionRow {
                    location,
                    scenario,
                    quantity,
                    family: Some(report.spec.family()),
                    p_value: Some(round_sig(report.p_value, 6)),
                    qq_r: Some(round_sig(report.qq_r, 6)),
                    status: "selected".to_string(),
                },
                None => SelectionRow {
                    location,
                    scenario,
                    quantity,
                    family: None,
                    p_value: None,
                    qq_r: None,
                    status: format!(
                        "error: no candidate reached Q-Q r {MIN_QQ_R} ({} fitted)",
                        candidates.len()
                    ),
                },
            }
        })
        .collect()
}
