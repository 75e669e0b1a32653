//! Synthesis pipeline checks across every preset cell: coverage, draw
//! invariants, discretization, and pooled ensemble agreement with the
//! generating statistics.

use chanstat_core::normalize::{first_arrival_ns, fspl_db};
use chanstat_core::synthesis::{ensemble_summary, pdp_to_cir};
use chanstat_core::{presets, Scenario};

#[test]
fn presets_cover_all_eight_cells() {
    let all = presets::all();
    assert_eq!(all.len(), 8);
    for location in presets::LOCATIONS {
        for scenario in [Scenario::Los, Scenario::Nlos] {
            let stats = presets::preset(location, scenario).unwrap();
            assert_eq!(stats.location(), location);
            assert_eq!(stats.scenario(), scenario);
            assert!(!stats.nop_table().is_empty());
        }
    }
    assert!(presets::preset("Nowhere", Scenario::Los).is_none());
}

#[test]
fn sampled_pdps_respect_the_documented_structure() {
    for stats in presets::all() {
        let bin = &stats.nop_table()[0];
        let distance = 0.5 * (bin.lower_m.max(1.0) + bin.upper_m);
        let pdp = stats.sample_pdp(distance, 99, None).unwrap();

        // Deterministic per seed.
        assert_eq!(pdp, stats.sample_pdp(distance, 99, None).unwrap());

        // First tap at the line-of-sight arrival, delays sorted.
        assert_eq!(pdp.taps[0].delay_ns, first_arrival_ns(distance));
        for pair in pdp.taps.windows(2) {
            assert!(pair[0].delay_ns <= pair[1].delay_ns);
        }

        // The drawn count must be one of the bin's observed counts.
        let bin = stats.coverage(distance).unwrap();
        assert!(bin.counts.contains(&pdp.taps.len()));

        // Phases live on [0, 2pi); gains are negative of FSPL size.
        for tap in &pdp.taps {
            assert!((0.0..2.0 * std::f64::consts::PI).contains(&tap.phase_rad));
            assert!(tap.gain_db.is_finite());
        }
    }
}

#[test]
fn path_count_override_allows_out_of_coverage_distances() {
    let stats = presets::preset("Sello", Scenario::Los).unwrap();
    let far = 10_000.0;
    assert!(stats.coverage(far).is_none());
    assert!(stats.sample_pdp(far, 5, None).is_err());

    let pdp = stats.sample_pdp(far, 5, Some(12)).unwrap();
    assert_eq!(pdp.taps.len(), 12);
}

#[test]
fn cir_preserves_energy_when_bins_do_not_collide() {
    let stats = presets::preset("TUAS2", Scenario::Nlos).unwrap();
    let pdp = stats.sample_pdp(25.0, 7, Some(20)).unwrap();

    // At a wide enough bandwidth each tap lands in its own bin, so the
    // binned energy equals the sum of tap powers exactly (no coherent
    // mixing). 200 GHz gives 5 ps bins against nanosecond tap spacing.
    let cir = pdp_to_cir(&pdp, 200e9).unwrap();
    if cir.len() == pdp.taps.len() {
        let tap_energy: f64 = pdp
            .taps
            .iter()
            .map(|t| 10f64.powf(t.gain_db / 10.0))
            .sum();
        let bin_energy: f64 = cir.iter().map(|b| b.re * b.re + b.im * b.im).sum();
        assert!((tap_energy - bin_energy).abs() <= 1e-12 * tap_energy);
    } else {
        panic!("expected distinct bins at 200 GHz; got {} for 20 taps", cir.len());
    }

    // At a narrow bandwidth everything collapses into few bins but the
    // complex sums stay finite and the indices stay sorted.
    let coarse = pdp_to_cir(&pdp, 50e6).unwrap();
    assert!(coarse.len() < pdp.taps.len());
    for pair in coarse.windows(2) {
        assert!(pair[0].bin_index < pair[1].bin_index);
    }
}

#[test]
fn pooled_ensembles_match_their_generating_statistics() {
    // Pool enough realizations that the pooled KS test has real power,
    // then require it NOT to reject: the synthesizer must reproduce its
    // own target distributions.
    for stats in presets::all() {
        let bin = &stats.nop_table()[0];
        let distance = 0.5 * (bin.lower_m.max(1.0) + bin.upper_m);
        let pdps: Vec<_> = (0..300)
            .map(|i| stats.sample_pdp(distance, 40_000 + i, None).unwrap())
            .collect();
        let summary = ensemble_summary(&stats, &pdps).unwrap();

        assert_eq!(summary.realizations, 300);
        let expected_taps: usize = pdps.iter().map(|p| p.taps.len()).sum();
        assert_eq!(summary.total_taps, expected_taps);

        let cell = format!("{} {}", stats.location(), stats.scenario());
        let power_p = summary.power_ks_p.unwrap();
        assert!(power_p > 0.005, "{cell}: power KS p = {power_p}");
        let delay_p = summary.delay_ks_p.unwrap();
        assert!(delay_p > 0.005, "{cell}: delay KS p = {delay_p}");

        // Pooled means sit near the spec means (a few standard errors).
        let delay_mean = stats.delay_spec().mean().unwrap();
        let got_delay = summary.mean_excess_delay_ns.unwrap();
        assert!(
            (got_delay - delay_mean).abs() <= 0.1 * delay_mean.abs().max(1.0),
            "{cell}: excess delay mean {got_delay} vs {delay_mean}"
        );
        let power_mean = stats.power_spec().mean().unwrap();
        let got_power = summary.mean_normalized_power_db.unwrap();
        assert!(
            (got_power - power_mean).abs() <= 0.1 * power_mean.abs().max(1.0),
            "{cell}: power mean {got_power} vs {power_mean}"
        );
    }
}

#[test]
fn ensemble_powers_separate_fspl_from_gains() {
    let stats = presets::preset("Airport", Scenario::Los).unwrap();
    let distance = 15.0;
    let pdp = stats.sample_pdp(distance, 3, None).unwrap();
    let fspl = fspl_db(distance, stats.frequency_hz()).unwrap();

    let summary = ensemble_summary(&stats, std::slice::from_ref(&pdp)).unwrap();
    let mean_gain: f64 =
        pdp.taps.iter().map(|t| t.gain_db).sum::<f64>() / pdp.taps.len() as f64;
    let got = summary.mean_normalized_power_db.unwrap();
    assert!((got - (mean_gain + fspl)).abs() <= 1e-9);
}
