//! Maximum-likelihood parameter estimation.
//!
//! Normal and Exponential have closed-form estimators. Every other family
//! is fitted by Nelder-Mead on the negative log-likelihood in a
//! transformed space where all constraints disappear:
//!
//! * free location: `loc = min(x) - eps - exp(t)`, which keeps the support
//!   edge strictly below the smallest observation (eps is a fixed fraction
//!   of the data range, so the unbounded-likelihood spike of
//!   three-parameter families stays capped);
//! * `scale = exp(s)` and `shape_i = exp(w_i)`;
//! * Beta: the upper edge is `max(x) + eps + exp(u)` and the scale is
//!   derived, so both edges always enclose the data.
//!
//! Several starting points (moment and quantile based, padded with seeded
//! jitters to at least five) are polished independently; the best final
//! value wins. Points outside a family's support make the objective +inf
//! rather than an error, so the simplex can recover from a bad step.

use crate::dist::{DistributionSpec, Family};
use crate::error::{Error, Result};
use crate::optim::NelderMead;
use crate::rng::Xoshiro256PlusPlus;

/// Euler-Mascheroni constant (Weibull log-moment initializer).
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Controls for [`fit_mle`].
#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Pin the location parameter instead of estimating it.
    pub fixed_loc: Option<f64>,
    /// Relative spread of simplex log-likelihood values at which a start
    /// counts as converged. Must be positive.
    pub tol: f64,
    /// Objective-evaluation budget per start.
    pub max_evals: usize,
    /// Seed for the jittered extra starts.
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            fixed_loc: None,
            tol: 1e-8,
            max_evals: 10_000,
            seed: 42,
        }
    }
}

/// Fits `family` to `data` by maximum likelihood.
///
/// Needs at least `3 + shape_arity` points. Fails with
/// [`Error::NonConvergence`] (carrying the best spec found) only when no
/// start meets the tolerance.
pub fn fit_mle(family: Family, data: &[f64], options: &FitOptions) -> Result<DistributionSpec> {
    if !(options.tol.is_finite() && options.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "fit tolerance must be positive, got {}",
            options.tol
        )));
    }
    if options.max_evals == 0 {
        return Err(Error::InvalidArgument(
            "fit evaluation budget must be at least 1".into(),
        ));
    }
    let needed = 3 + family.shape_arity();
    if data.len() < needed {
        return Err(Error::TooFewPoints {
            family,
            needed,
            got: data.len(),
        });
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "fit data contains non-finite values".into(),
        ));
    }
    let stats = DataStats::of(data);
    if stats.range == 0.0 {
        return Err(Error::DegenerateData(format!(
            "all {} points equal {}; nothing to fit",
            stats.n, stats.min
        )));
    }
    if let Some(loc) = options.fixed_loc {
        if !loc.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "fixed location must be finite, got {loc}"
            )));
        }
        // For the edge-anchored families the pinned location must not cut
        // into the sample, and points exactly on the edge leave no finite
        // maximum (the edge density is 0 or unbounded) except for
        // Exponential, whose edge density is 1/scale.
        if family != Family::Normal {
            if stats.min < loc {
                return Err(Error::InvalidArgument(format!(
                    "data minimum {} lies below the pinned location {loc}",
                    stats.min
                )));
            }
            if stats.min == loc && family != Family::Exponential {
                return Err(Error::DegenerateData(format!(
                    "points exactly at the pinned location make the {family} likelihood degenerate"
                )));
            }
        }
    }

    match family {
        Family::Normal => {
            let (loc, scale) = match options.fixed_loc {
                Some(mu) => (mu, rms_about(data, mu)),
                None => (stats.mean, stats.sd),
            };
            DistributionSpec::new(family, loc, scale, vec![])
        }
        Family::Exponential => {
            let loc = options.fixed_loc.unwrap_or(stats.min);
            DistributionSpec::new(family, loc, stats.mean - loc, vec![])
        }
        _ => fit_numeric(family, data, &stats, options),
    }
}

fn rms_about(data: &[f64], center: f64) -> f64 {
    let acc: f64 = data.iter().map(|x| (x - center).powi(2)).sum();
    (acc / data.len() as f64).sqrt()
}

/// Basic order and moment statistics shared by the initializers.
struct DataStats {
    n: usize,
    min: f64,
    max: f64,
    range: f64,
    mean: f64,
    /// Uncorrected (1/n) standard deviation.
    sd: f64,
    q1: f64,
    med: f64,
    q3: f64,
}

impl DataStats {
    fn of(data: &[f64]) -> Self {
        let n = data.len();
        let mut sorted = data.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = data.iter().sum::<f64>() / n as f64;
        let var = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let order = |p: f64| -> f64 {
            let idx = ((n as f64 * p).ceil() as usize).clamp(1, n);
            sorted[idx - 1]
        };
        Self {
            n,
            min: sorted[0],
            max: sorted[n - 1],
            range: sorted[n - 1] - sorted[0],
            mean,
            sd: var.sqrt(),
            q1: order(0.25),
            med: order(0.5),
            q3: order(0.75),
        }
    }
}

fn fit_numeric(
    family: Family,
    data: &[f64],
    stats: &DataStats,
    options: &FitOptions,
) -> Result<DistributionSpec> {
    let eps = 1e-9 * stats.range;
    let min = stats.min;
    let max = stats.max;
    let fixed_loc = options.fixed_loc;

    let decode = move |theta: &[f64]| -> Option<DistributionSpec> {
        let mut i = 0;
        let loc = match fixed_loc {
            Some(l) => l,
            None => {
                i += 1;
                min - eps - theta[0].exp()
            }
        };
        if family == Family::Beta {
            let upper = max + eps + theta[i].exp();
            let a = theta[i + 1].exp();
            let b = theta[i + 2].exp();
            DistributionSpec::new(family, loc, upper - loc, vec![a, b]).ok()
        } else {
            let scale = theta[i].exp();
            let shapes: Vec<f64> = theta[i + 1..].iter().map(|w| w.exp()).collect();
            DistributionSpec::new(family, loc, scale, shapes).ok()
        }
    };

    let mut objective = |theta: &[f64]| -> f64 {
        match decode(theta) {
            Some(spec) => {
                let ll = spec.ln_likelihood_sum(data);
                if ll.is_finite() {
                    -ll
                } else {
                    f64::INFINITY
                }
            }
            None => f64::INFINITY,
        }
    };

    let starts = build_starts(family, data, stats, fixed_loc, eps, options.seed);
    let solver = NelderMead {
        tol: options.tol,
        max_evals: options.max_evals,
    };

    let mut best: Option<(f64, DistributionSpec)> = None;
    let mut any_converged = false;
    let mut total_evals = 0;
    for start in &starts {
        let run = solver.minimize(&mut objective, start, 0.5);
        total_evals += run.evals;
        any_converged |= run.converged;
        if let Some(spec) = decode(&run.x) {
            if best.as_ref().map_or(true, |(fx, _)| run.fx < *fx) {
                best = Some((run.fx, spec));
            }
        }
    }

    // Every constructed start decodes to a valid spec, so `best` is always
    // populated; the fallback covers the impossible case defensively.
    let (fx, spec) = match best {
        Some(b) => b,
        None => {
            let spec = decode(&starts[0]).expect("initial start is valid by construction");
            (f64::INFINITY, spec)
        }
    };
    if !any_converged || !fx.is_finite() {
        return Err(Error::NonConvergence {
            family,
            evals: total_evals,
            best: Box::new(spec),
        });
    }
    Ok(spec)
}

/// Builds the list of transformed starting points: moment/quantile
/// initializers at up to three trial locations, padded with seeded jitters
/// of the first start until there are at least five.
fn build_starts(
    family: Family,
    data: &[f64],
    stats: &DataStats,
    fixed_loc: Option<f64>,
    eps: f64,
    seed: u64,
) -> Vec<Vec<f64>> {
    let mut starts = Vec::new();
    match fixed_loc {
        Some(loc) => {
            for tail in tail_starts(family, data, stats, loc, eps) {
                starts.push(tail);
            }
        }
        None => {
            for frac in [0.01, 0.25, 1.0] {
                let delta = frac * stats.range;
                let loc0 = stats.min - delta;
                let t0 = (delta - eps).ln();
                for tail in tail_starts(family, data, stats, loc0, eps) {
                    let mut theta = Vec::with_capacity(1 + tail.len());
                    theta.push(t0);
                    theta.extend(tail);
                    starts.push(theta);
                }
            }
        }
    }

    let base = starts.len();
    let mut jitter_index = 0u64;
    while starts.len() < 5 {
        let mut rng = Xoshiro256PlusPlus::derive(seed, jitter_index);
        let mut theta = starts[jitter_index as usize % base].clone();
        for coord in &mut theta {
            *coord += 1.6 * (rng.next_f64() - 0.5);
        }
        starts.push(theta);
        jitter_index += 1;
    }
    starts
}

/// Initial `[ln scale, ln shapes...]` vectors (for Beta:
/// `[ln(upper - max - eps), ln a, ln b]`) for one trial location.
fn tail_starts(
    family: Family,
    data: &[f64],
    stats: &DataStats,
    loc0: f64,
    eps: f64,
) -> Vec<Vec<f64>> {
    match family {
        Family::LogNormal => {
            let (mean_ln, sd_ln) = ln_stats(data, loc0);
            vec![vec![mean_ln, sd_ln.max(0.05).ln()]]
        }
        Family::Rayleigh => {
            let m2 = mean_sq(data, loc0);
            vec![vec![(m2 / 2.0).sqrt().ln()]]
        }
        Family::Rician => {
            // E[Y^2] = scale^2 (2 + b^2); try a spread of b regimes.
            let m2 = mean_sq(data, loc0);
            [0.5f64, 2.0, 5.0]
                .iter()
                .map(|&b| vec![(m2 / (2.0 + b * b)).sqrt().ln(), b.ln()])
                .collect()
        }
        Family::Nakagami => {
            // scale^2 = E[Y^2]; nu = E[Y^2]^2 / Var[Y^2].
            let sq: Vec<f64> = data.iter().map(|x| (x - loc0).powi(2)).collect();
            let m2 = sq.iter().sum::<f64>() / sq.len() as f64;
            let v2 = sq.iter().map(|y| (y - m2).powi(2)).sum::<f64>() / sq.len() as f64;
            let nu0 = if v2 > 0.0 {
                (m2 * m2 / v2).clamp(0.1, 100.0)
            } else {
                1.0
            };
            vec![vec![m2.sqrt().ln(), nu0.ln()]]
        }
        Family::Gamma => {
            let m = stats.mean - loc0;
            let a0 = (m / stats.sd).powi(2).clamp(0.05, 1e4);
            let scale0 = stats.sd * stats.sd / m;
            vec![vec![scale0.ln(), a0.ln()]]
        }
        Family::Beta => {
            // Method of moments on the rescaled sample for two trial upper
            // edges.
            [0.05f64, 1.0]
                .iter()
                .map(|&frac| {
                    let du = frac * stats.range;
                    let upper0 = stats.max + du;
                    let width = upper0 - loc0;
                    let ys: Vec<f64> = data.iter().map(|x| (x - loc0) / width).collect();
                    let mb = ys.iter().sum::<f64>() / ys.len() as f64;
                    let vb = ys.iter().map(|y| (y - mb).powi(2)).sum::<f64>() / ys.len() as f64;
                    let common = (mb * (1.0 - mb) / vb.max(1e-12) - 1.0).max(0.1);
                    let a0 = (mb * common).clamp(0.05, 500.0);
                    let b0 = ((1.0 - mb) * common).clamp(0.05, 500.0);
                    vec![(du - eps).max(eps).ln(), a0.ln(), b0.ln()]
                })
                .collect()
        }
        Family::LogLogistic => {
            // Median gives the scale; the quartile ratio gives the shape
            // through q3/q1 = 9^{1/c}.
            let scale0 = stats.med - loc0;
            let ratio = (stats.q3 - loc0) / (stats.q1 - loc0);
            let c0 = if ratio > 1.0001 {
                (9f64.ln() / ratio.ln()).clamp(0.1, 60.0)
            } else {
                2.0
            };
            vec![vec![scale0.ln(), c0.ln()]]
        }
        Family::Weibull => {
            // ln Y is Gumbel: sd = pi/(c sqrt(6)), mean = ln scale -
            // gamma/c.
            let (mean_ln, sd_ln) = ln_stats(data, loc0);
            let c0 = (std::f64::consts::PI / (6f64.sqrt() * sd_ln.max(1e-3))).clamp(0.05, 60.0);
            vec![vec![mean_ln + EULER_GAMMA / c0, c0.ln()]]
        }
        Family::Normal | Family::Exponential => {
            unreachable!("closed-form families never reach the numeric fitter")
        }
    }
}

/// Mean and uncorrected standard deviation of ln(x - loc).
fn ln_stats(data: &[f64], loc: f64) -> (f64, f64) {
    let lns: Vec<f64> = data.iter().map(|x| (x - loc).ln()).collect();
    let mean = lns.iter().sum::<f64>() / lns.len() as f64;
    let var = lns.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / lns.len() as f64;
    (mean, var.sqrt())
}

fn mean_sq(data: &[f64], loc: f64) -> f64 {
    data.iter().map(|x| (x - loc).powi(2)).sum::<f64>() / data.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normal_closed_form() {
        let data = [1.0, 2.0, 3.0, 4.0];
        let fit = fit_mle(Family::Normal, &data, &FitOptions::default()).unwrap();
        assert_relative_eq!(fit.loc(), 2.5, max_relative = 1e-15);
        assert_relative_eq!(fit.scale(), 1.25f64.sqrt(), max_relative = 1e-15);

        let pinned = fit_mle(
            Family::Normal,
            &data,
            &FitOptions {
                fixed_loc: Some(0.0),
                ..FitOptions::default()
            },
        )
        .unwrap();
        assert_eq!(pinned.loc(), 0.0);
        assert_relative_eq!(pinned.scale(), 7.5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn exponential_closed_form() {
        let data = [1.0, 2.0, 3.0, 4.0];
        let fit = fit_mle(Family::Exponential, &data, &FitOptions::default()).unwrap();
        assert_eq!(fit.loc(), 1.0);
        assert_relative_eq!(fit.scale(), 1.5, max_relative = 1e-15);

        let pinned = fit_mle(
            Family::Exponential,
            &data,
            &FitOptions {
                fixed_loc: Some(0.0),
                ..FitOptions::default()
            },
        )
        .unwrap();
        assert_eq!(pinned.loc(), 0.0);
        assert_relative_eq!(pinned.scale(), 2.5, max_relative = 1e-15);
    }

    #[test]
    fn input_validation() {
        let opts = FitOptions::default();
        // 3 + 2 shapes points needed for Beta.
        let four = [0.1, 0.2, 0.3, 0.4];
        assert!(matches!(
            fit_mle(Family::Beta, &four, &opts),
            Err(Error::TooFewPoints { needed: 5, got: 4, .. })
        ));
        assert!(matches!(
            fit_mle(Family::Normal, &[1.0, f64::NAN, 2.0], &opts),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            fit_mle(Family::Normal, &[2.0, 2.0, 2.0], &opts),
            Err(Error::DegenerateData(_))
        ));
        assert!(fit_mle(
            Family::Normal,
            &[1.0, 2.0, 3.0],
            &FitOptions {
                tol: 0.0,
                ..FitOptions::default()
            }
        )
        .is_err());
    }

    #[test]
    fn pinned_location_must_respect_support() {
        let opts = |loc| FitOptions {
            fixed_loc: Some(loc),
            ..FitOptions::default()
        };
        // Data below the pinned edge.
        assert!(matches!(
            fit_mle(Family::Rayleigh, &[0.5, 1.0, 2.0], &opts(0.7)),
            Err(Error::InvalidArgument(_))
        ));
        // A point exactly on the edge: fine for Exponential, degenerate
        // for the families whose edge density is 0 or unbounded.
        assert!(fit_mle(Family::Exponential, &[0.0, 1.0, 2.0], &opts(0.0)).is_ok());
        assert!(matches!(
            fit_mle(Family::Rayleigh, &[0.0, 1.0, 2.0], &opts(0.0)),
            Err(Error::DegenerateData(_))
        ));
        // Normal's loc is not a support edge, so anything goes.
        assert!(fit_mle(Family::Normal, &[0.5, 1.0, 2.0], &opts(5.0)).is_ok());
    }

    #[test]
    fn gamma_recovery_with_pinned_location() {
        let truth = DistributionSpec::new(Family::Gamma, 0.0, 2.0, vec![3.0]).unwrap();
        let data = truth.sample(2000, 7);
        let fit = fit_mle(
            Family::Gamma,
            &data,
            &FitOptions {
                fixed_loc: Some(0.0),
                ..FitOptions::default()
            },
        )
        .unwrap();
        assert!(
            (fit.scale() - 2.0).abs() / 2.0 < 0.10,
            "scale {}",
            fit.scale()
        );
        assert!(
            (fit.shapes()[0] - 3.0).abs() / 3.0 < 0.10,
            "shape {}",
            fit.shapes()[0]
        );
    }

    #[test]
    fn lognormal_recovery_with_free_location() {
        let truth = DistributionSpec::new(Family::LogNormal, -35.5, 17.4, vec![0.37]).unwrap();
        let data = truth.sample(2000, 11);
        let fit = fit_mle(Family::LogNormal, &data, &FitOptions::default()).unwrap();
        assert!(
            (fit.loc() - -35.5).abs() < 0.1 * 35.5,
            "loc {}",
            fit.loc()
        );
        assert!(
            (fit.scale() - 17.4).abs() / 17.4 < 0.15,
            "scale {}",
            fit.scale()
        );
        assert!(
            (fit.shapes()[0] - 0.37).abs() / 0.37 < 0.20,
            "shape {}",
            fit.shapes()[0]
        );
    }

    #[test]
    fn fitted_likelihood_beats_moment_start() {
        // The polished fit must not be worse than the raw initializer.
        let truth = DistributionSpec::new(Family::Weibull, 0.0, 52.72, vec![1.05]).unwrap();
        let data = truth.sample(500, 3);
        let opts = FitOptions {
            fixed_loc: Some(0.0),
            ..FitOptions::default()
        };
        let fit = fit_mle(Family::Weibull, &data, &opts).unwrap();
        let fitted_ll = fit.log_likelihood(&data).unwrap();
        let truth_ll = truth.log_likelihood(&data).unwrap();
        assert!(
            fitted_ll >= truth_ll - 1e-6,
            "fitted {fitted_ll} vs truth {truth_ll}"
        );
    }
}
