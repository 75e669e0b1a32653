//! Goodness-of-fit scoring: one-sample Kolmogorov-Smirnov plus Q-Q plot
//! correlation.
//!
//! The KS p-value uses the asymptotic Kolmogorov distribution and treats
//! the candidate spec as fully specified. When the parameters were
//! estimated from the same sample the p-values are optimistic (the
//! Lilliefors effect); the pipeline uses them as a relative ranking score
//! across families, which is the convention the fitted tables follow.

use serde::{Deserialize, Serialize};

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};

/// Scores for one candidate spec against one sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GofReport {
    pub spec: DistributionSpec,
    pub ks_d: f64,
    pub p_value: f64,
    pub qq_r: f64,
    pub n: usize,
}

/// Kolmogorov-Smirnov statistic: the largest gap between the empirical
/// step function and the model CDF, checked on both sides of each step.
pub fn ks_statistic(data: &[f64], spec: &DistributionSpec) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyData("ks_statistic"));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "ks_statistic data contains non-finite values".into(),
        ));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = spec.cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}

/// Asymptotic p-value for a KS statistic `d` on `n` points:
/// Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2) at lambda = sqrt(n) d.
///
/// Below lambda = 0.18 the complementary theta-series term is under
/// 1e-15, so the value is 1 to double precision and is returned directly.
pub fn ks_pvalue(d: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "KS statistic must lie in [0, 1], got {d}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "KS p-value needs at least one data point".into(),
        ));
    }
    let lambda = (n as f64).sqrt() * d;
    if lambda <= 0.18 {
        return Ok(1.0);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=1000 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += sign * term;
        if term < 1e-14 {
            break;
        }
        sign = -sign;
    }
    Ok((2.0 * sum).clamp(0.0, 1.0))
}

/// Q-Q pairs (theoretical quantile, empirical order statistic) at the
/// plotting positions (i - 1/2) / n.
pub fn qq_points(data: &[f64], spec: &DistributionSpec) -> Result<Vec<(f64, f64)>> {
    if data.is_empty() {
        return Err(Error::EmptyData("qq_points"));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "qq_points data contains non-finite values".into(),
        ));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let p = (i as f64 + 0.5) / n;
            Ok((spec.quantile(p)?, x))
        })
        .collect()
}

/// Pearson correlation of the Q-Q pairs. Needs at least two points and
/// spread on both axes.
pub fn qq_correlation(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "Q-Q correlation needs at least two points".into(),
        ));
    }
    let n = points.len() as f64;
    let (mut mt, mut me) = (0.0, 0.0);
    for (t, e) in points {
        mt += t;
        me += e;
    }
    mt /= n;
    me /= n;
    let (mut stt, mut see, mut ste) = (0.0, 0.0, 0.0);
    for (t, e) in points {
        let (dt, de) = (t - mt, e - me);
        stt += dt * dt;
        see += de * de;
        ste += dt * de;
    }
    if stt == 0.0 || see == 0.0 {
        return Err(Error::DegenerateData(
            "Q-Q correlation is undefined for a constant axis".into(),
        ));
    }
    Ok(ste / (stt * see).sqrt())
}

/// Full scorecard for one spec against one sample.
pub fn evaluate(data: &[f64], spec: &DistributionSpec) -> Result<GofReport> {
    let ks_d = ks_statistic(data, spec)?;
    let p_value = ks_pvalue(ks_d, data.len())?;
    let qq_r = qq_correlation(&qq_points(data, spec)?)?;
    Ok(GofReport {
        spec: spec.clone(),
        ks_d,
        p_value,
        qq_r,
        n: data.len(),
    })
}
