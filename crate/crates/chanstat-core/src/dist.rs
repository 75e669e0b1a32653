//! Parametric distribution engine for the ten families used by the
//! fitting pipeline.
//!
//! Every family is expressed in loc/scale/shape form: with y = (x - loc) /
//! scale, the density is f(x) = f0(y; shapes) / scale where f0 is the
//! family's unit form. Fitted parameter tables therefore load directly as
//! [`DistributionSpec`] values.
//!
//! Specs are validated at construction (and at deserialization), so the
//! evaluation methods (`pdf`, `cdf`, `quantile`, ...) never see an invalid
//! parameter vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Xoshiro256PlusPlus;
use crate::special;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// The supported parametric families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Normal,
    Exponential,
    LogNormal,
    Rayleigh,
    Rician,
    Nakagami,
    Gamma,
    Beta,
    LogLogistic,
    Weibull,
}

impl Family {
    /// All families, in canonical order.
    pub const ALL: [Family; 10] = [
        Family::Normal,
        Family::Exponential,
        Family::LogNormal,
        Family::Rayleigh,
        Family::Rician,
        Family::Nakagami,
        Family::Gamma,
        Family::Beta,
        Family::LogLogistic,
        Family::Weibull,
    ];

    /// Default candidate set for normalized-power fits.
    pub const POWER_SET: [Family; 9] = [
        Family::Normal,
        Family::Exponential,
        Family::LogNormal,
        Family::Rayleigh,
        Family::Rician,
        Family::Nakagami,
        Family::Gamma,
        Family::Beta,
        Family::LogLogistic,
    ];

    /// Default candidate set for excess-delay fits (location pinned at 0).
    pub const DELAY_SET: [Family; 2] = [Family::Exponential, Family::Weibull];

    /// Number of shape parameters beyond loc and scale.
    pub fn shape_arity(self) -> usize {
        match self {
            Family::Normal | Family::Exponential | Family::Rayleigh => 0,
            Family::Beta => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Normal => "Normal",
            Family::Exponential => "Exponential",
            Family::LogNormal => "LogNormal",
            Family::Rayleigh => "Rayleigh",
            Family::Rician => "Rician",
            Family::Nakagami => "Nakagami",
            Family::Gamma => "Gamma",
            Family::Beta => "Beta",
            Family::LogLogistic => "LogLogistic",
            Family::Weibull => "Weibull",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    /// Case-insensitive; separators (`-`, `_`, spaces) are ignored so both
    /// `LogNormal` and `log-normal` parse.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let family = match key.as_str() {
            "normal" => Family::Normal,
            "exponential" => Family::Exponential,
            "lognormal" => Family::LogNormal,
            "rayleigh" => Family::Rayleigh,
            "rician" => Family::Rician,
            "nakagami" => Family::Nakagami,
            "gamma" => Family::Gamma,
            "beta" => Family::Beta,
            "loglogistic" => Family::LogLogistic,
            "weibull" => Family::Weibull,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown distribution family '{s}'"
                )))
            }
        };
        Ok(family)
    }
}

/// A fully parameterized distribution: family plus loc/scale/shape values.
///
/// Invariants (enforced by [`DistributionSpec::new`] and by
/// deserialization): `scale > 0`, all parameters finite, shape count and
/// domains per family (`LogNormal` sigma > 0, `Rician` b >= 0, `Nakagami`
/// nu > 0, `Gamma` a > 0, `Beta` a > 0 and b > 0, `LogLogistic` and
/// `Weibull` c > 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct DistributionSpec {
    family: Family,
    loc: f64,
    scale: f64,
    shapes: Vec<f64>,
}

/// Wire form of a spec: `{family, loc, scale, shapes[]}`.
#[derive(Serialize, Deserialize)]
struct SpecRepr {
    family: Family,
    loc: f64,
    scale: f64,
    shapes: Vec<f64>,
}

impl TryFrom<SpecRepr> for DistributionSpec {
    type Error = Error;
    fn try_from(r: SpecRepr) -> Result<Self> {
        DistributionSpec::new(r.family, r.loc, r.scale, r.shapes)
    }
}

impl From<DistributionSpec> for SpecRepr {
    fn from(s: DistributionSpec) -> Self {
        SpecRepr {
            family: s.family,
            loc: s.loc,
            scale: s.scale,
            shapes: s.shapes,
        }
    }
}

impl std::fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(loc {}, scale {}", self.family, self.loc, self.scale)?;
        for s in &self.shapes {
            write!(f, ", shape {s}")?;
        }
        write!(f, ")")
    }
}

impl DistributionSpec {
    pub fn new(family: Family, loc: f64, scale: f64, shapes: Vec<f64>) -> Result<Self> {
        let invalid = |message: String| Error::InvalidSpec { family, message };
        if !loc.is_finite() {
            return Err(invalid(format!("loc must be finite, got {loc}")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(invalid(format!("scale must be positive, got {scale}")));
        }
        if shapes.len() != family.shape_arity() {
            return Err(invalid(format!(
                "expected {} shape parameter(s), got {}",
                family.shape_arity(),
                shapes.len()
            )));
        }
        if shapes.iter().any(|s| !s.is_finite()) {
            return Err(invalid("shape parameters must be finite".into()));
        }
        let domain_ok = match family {
            Family::Rician => shapes[0] >= 0.0,
            Family::LogNormal
            | Family::Nakagami
            | Family::Gamma
            | Family::LogLogistic
            | Family::Weibull => shapes[0] > 0.0,
            Family::Beta => shapes[0] > 0.0 && shapes[1] > 0.0,
            _ => true,
        };
        if !domain_ok {
            return Err(invalid(format!("shape out of domain: {shapes:?}")));
        }
        Ok(Self {
            family,
            loc,
            scale,
            shapes,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn loc(&self) -> f64 {
        self.loc
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn shapes(&self) -> &[f64] {
        &self.shapes
    }

    /// Support interval (lower, upper) in data units. The Normal support is
    /// the whole real line, Beta is [loc, loc + scale], every other family
    /// is [loc, infinity).
    pub fn support(&self) -> (f64, f64) {
        match self.family {
            Family::Normal => (f64::NEG_INFINITY, f64::INFINITY),
            Family::Beta => (self.loc, self.loc + self.scale),
            _ => (self.loc, f64::INFINITY),
        }
    }

    /// Probability density at `x`; 0 outside the support. At a support
    /// edge where the unit form diverges (for example Gamma with a < 1 at
    /// x = loc) the mathematical value `inf` is returned.
    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    /// Natural log of [`DistributionSpec::pdf`]; `-inf` outside support.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        let y = (x - self.loc) / self.scale;
        self.unit_ln_pdf(y) - self.scale.ln()
    }

    /// Cumulative distribution at `x`; clamped to [0, 1].
    pub fn cdf(&self, x: f64) -> f64 {
        let y = (x - self.loc) / self.scale;
        self.unit_cdf(y)
    }

    /// Quantile (inverse CDF) for q in the open interval (0, 1).
    ///
    /// Closed forms where the family has one; otherwise monotone
    /// safeguarded Newton on the CDF, converging well past the 1e-9
    /// round-trip contract.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "quantile probability must lie in (0, 1), got {q}"
            )));
        }
        Ok(self.loc + self.scale * self.unit_quantile(q))
    }

    /// Draws `n` values by inversion: each sample is the quantile of a
    /// uniform draw on (0, 1). Deterministic for a given seed.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = Xoshiro256PlusPlus::new(seed);
        (0..n).map(|_| self.sample_one(&mut rng)).collect()
    }

    /// Draws one value from an existing stream (used by synthesis, which
    /// interleaves draws from several specs on one stream).
    pub fn sample_one(&self, rng: &mut Xoshiro256PlusPlus) -> f64 {
        self.loc + self.scale * self.unit_quantile(rng.next_f64())
    }

    /// Sum of log densities; `-inf` if any point lies outside the support.
    pub fn log_likelihood(&self, data: &[f64]) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::EmptyData("log_likelihood"));
        }
        Ok(self.ln_likelihood_sum(data))
    }

    /// Analytic mean, or `None` where it diverges (LogLogistic with
    /// c <= 1).
    pub fn mean(&self) -> Option<f64> {
        let unit_mean = match self.family {
            Family::Normal => 0.0,
            Family::Exponential => 1.0,
            Family::LogNormal => {
                let s = self.shapes[0];
                (s * s / 2.0).exp()
            }
            Family::Rayleigh => (std::f64::consts::PI / 2.0).sqrt(),
            Family::Rician => {
                // sqrt(pi/2) L_{1/2}(-b^2/2) with the Laguerre value
                // expressed through I0/I1 in log space for stability.
                let b = self.shapes[0];
                let t = b * b / 2.0;
                let half = t / 2.0;
                let l_half = (1.0 + t) * (special::ln_bessel_i0(half) - half).exp()
                    + if t == 0.0 {
                        0.0
                    } else {
                        t * (special::ln_bessel_i1(half) - half).exp()
                    };
                (std::f64::consts::PI / 2.0).sqrt() * l_half
            }
            Family::Nakagami => {
                let nu = self.shapes[0];
                (special::ln_gamma(nu + 0.5) - special::ln_gamma(nu)).exp() / nu.sqrt()
            }
            Family::Gamma => self.shapes[0],
            Family::Beta => self.shapes[0] / (self.shapes[0] + self.shapes[1]),
            Family::LogLogistic => {
                let c = self.shapes[0];
                if c <= 1.0 {
                    return None;
                }
                let t = std::f64::consts::PI / c;
                t / t.sin()
            }
            Family::Weibull => {
                let c = self.shapes[0];
                special::ln_gamma(1.0 + 1.0 / c).exp()
            }
        };
        Some(self.loc + self.scale * unit_mean)
    }

    /// Unit-form log density at y; the single-point ground truth that the
    /// batched likelihood loops must agree with.
    fn unit_ln_pdf(&self, y: f64) -> f64 {
        match self.family {
            Family::Normal => -0.5 * y * y - LN_SQRT_2PI,
            Family::Exponential => {
                if y < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -y
                }
            }
            Family::LogNormal => {
                let s = self.shapes[0];
                if y <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    let ly = y.ln();
                    -ly * ly / (2.0 * s * s) - ly - s.ln() - LN_SQRT_2PI
                }
            }
            Family::Rayleigh => {
                if y <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    y.ln() - y * y / 2.0
                }
            }
            Family::Rician => {
                let b = self.shapes[0];
                if y <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    y.ln() - (y * y + b * b) / 2.0 + special::ln_bessel_i0(b * y)
                }
            }
            Family::Nakagami => {
                let nu = self.shapes[0];
                if y < 0.0 {
                    f64::NEG_INFINITY
                } else if y == 0.0 {
                    edge_power(2.0 * nu - 1.0, |_| 0.0)
                } else {
                    2f64.ln() + nu * nu.ln() - special::ln_gamma(nu) + (2.0 * nu - 1.0) * y.ln()
                        - nu * y * y
                }
            }
            Family::Gamma => {
                let a = self.shapes[0];
                if y < 0.0 {
                    f64::NEG_INFINITY
                } else if y == 0.0 {
                    edge_power(a - 1.0, |_| -special::ln_gamma(a))
                } else {
                    (a - 1.0) * y.ln() - y - special::ln_gamma(a)
                }
            }
            Family::Beta => {
                let (a, b) = (self.shapes[0], self.shapes[1]);
                let lnb = special::ln_beta(a, b);
                if !(0.0..=1.0).contains(&y) {
                    f64::NEG_INFINITY
                } else if y == 0.0 {
                    edge_power(a - 1.0, |_| -lnb)
                } else if y == 1.0 {
                    edge_power(b - 1.0, |_| -lnb)
                } else {
                    (a - 1.0) * y.ln() + (b - 1.0) * (1.0 - y).ln() - lnb
                }
            }
            Family::LogLogistic => {
                let c = self.shapes[0];
                if y < 0.0 {
                    f64::NEG_INFINITY
                } else if y == 0.0 {
                    edge_power(c - 1.0, |_| c.ln())
                } else {
                    c.ln() + (c - 1.0) * y.ln() - 2.0 * ln1p_exp(c * y.ln())
                }
            }
            Family::Weibull => {
                let c = self.shapes[0];
                if y < 0.0 {
                    f64::NEG_INFINITY
                } else if y == 0.0 {
                    edge_power(c - 1.0, |_| c.ln())
                } else {
                    c.ln() + (c - 1.0) * y.ln() - y.powf(c)
                }
            }
        }
    }

    /// Unit-form CDF at y, clamped to [0, 1].
    fn unit_cdf(&self, y: f64) -> f64 {
        let v = match self.family {
            Family::Normal => special::norm_cdf(y),
            Family::Exponential => {
                if y <= 0.0 {
                    0.0
                } else {
                    -(-y).exp_m1()
                }
            }
            Family::LogNormal => {
                if y <= 0.0 {
                    0.0
                } else {
                    special::norm_cdf(y.ln() / self.shapes[0])
                }
            }
            Family::Rayleigh => {
                if y <= 0.0 {
                    0.0
                } else {
                    -(-y * y / 2.0).exp_m1()
                }
            }
            Family::Rician => rician_unit_cdf(self.shapes[0], y),
            Family::Nakagami => {
                let nu = self.shapes[0];
                if y <= 0.0 {
                    0.0
                } else {
                    special::gamma_p(nu, nu * y * y)
                }
            }
            Family::Gamma => {
                if y <= 0.0 {
                    0.0
                } else {
                    special::gamma_p(self.shapes[0], y)
                }
            }
            Family::Beta => {
                if y <= 0.0 {
                    0.0
                } else if y >= 1.0 {
                    1.0
                } else {
                    special::beta_inc(self.shapes[0], self.shapes[1], y)
                }
            }
            Family::LogLogistic => {
                let c = self.shapes[0];
                if y <= 0.0 {
                    0.0
                } else {
                    // Logistic function of c ln y, evaluated on the side
                    // that avoids overflow.
                    let t = c * y.ln();
                    if t >= 0.0 {
                        1.0 / (1.0 + (-t).exp())
                    } else {
                        let e = t.exp();
                        e / (1.0 + e)
                    }
                }
            }
            Family::Weibull => {
                let c = self.shapes[0];
                if y <= 0.0 {
                    0.0
                } else {
                    -(-y.powf(c)).exp_m1()
                }
            }
        };
        v.clamp(0.0, 1.0)
    }

    fn unit_quantile(&self, q: f64) -> f64 {
        match self.family {
            Family::Normal => special::inv_norm_cdf(q),
            Family::Exponential => -(-q).ln_1p(),
            Family::LogNormal => (self.shapes[0] * special::inv_norm_cdf(q)).exp(),
            Family::Rayleigh => (-2.0 * (-q).ln_1p()).sqrt(),
            Family::LogLogistic => (q / (1.0 - q)).powf(1.0 / self.shapes[0]),
            Family::Weibull => (-(-q).ln_1p()).powf(1.0 / self.shapes[0]),
            Family::Rician => self.invert_unit_cdf(q, self.shapes[0] + 10.0),
            Family::Nakagami => self.invert_unit_cdf(q, 2.0 + 4.0 / self.shapes[0].sqrt()),
            Family::Gamma => {
                let a = self.shapes[0];
                self.invert_unit_cdf(q, a + 10.0 * a.sqrt() + 10.0)
            }
            Family::Beta => self.bisect_newton(q, 0.0, 1.0),
        }
    }

    /// Numeric quantile for unit forms supported on [0, inf): expands the
    /// upper bracket geometrically, then runs safeguarded Newton.
    fn invert_unit_cdf(&self, q: f64, hi_init: f64) -> f64 {
        let mut hi = hi_init.max(1.0);
        let mut expansions = 0;
        while self.unit_cdf(hi) < q && expansions < 600 {
            hi *= 2.0;
            expansions += 1;
        }
        self.bisect_newton(q, 0.0, hi)
    }

    /// Safeguarded Newton iteration on the unit CDF over a valid bracket;
    /// falls back to bisection whenever the Newton step leaves the bracket.
    fn bisect_newton(&self, q: f64, mut lo: f64, mut hi: f64) -> f64 {
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.unit_cdf(x) - q;
            if f.abs() <= 1e-13 {
                break;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let density = self.unit_ln_pdf(x).exp();
            let step = f / density;
            let candidate = x - step;
            x = if step.is_finite() && candidate > lo && candidate < hi {
                candidate
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= f64::EPSILON * x.abs().max(1e-300) {
                break;
            }
        }
        x
    }

    /// Batched log-likelihood with per-spec constants hoisted out of the
    /// data loop; this is the fitting hot path. Must agree pointwise with
    /// `unit_ln_pdf` (covered by a property test).
    pub(crate) fn ln_likelihood_sum(&self, data: &[f64]) -> f64 {
        let n = data.len() as f64;
        let inv_s = 1.0 / self.scale;
        let ln_s = self.scale.ln();
        let loc = self.loc;
        match self.family {
            Family::Normal => {
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    acc += y * y;
                }
                -0.5 * acc - n * (ln_s + LN_SQRT_2PI)
            }
            Family::Exponential => {
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    if y < 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    acc += y;
                }
                -acc - n * ln_s
            }
            Family::LogNormal => {
                let s = self.shapes[0];
                let inv_2s2 = 1.0 / (2.0 * s * s);
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    if y <= 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    let ly = y.ln();
                    acc += ly * ly * inv_2s2 + ly;
                }
                -acc - n * (ln_s + s.ln() + LN_SQRT_2PI)
            }
            Family::Rayleigh => {
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    if y <= 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    acc += y.ln() - y * y / 2.0;
                }
                acc - n * ln_s
            }
            Family::Rician => {
                let b = self.shapes[0];
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    if y <= 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    acc += y.ln() - y * y / 2.0 + special::ln_bessel_i0(b * y);
                }
                acc - n * (ln_s + b * b / 2.0)
            }
            Family::Nakagami => {
                let nu = self.shapes[0];
                let e = 2.0 * nu - 1.0;
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    if y < 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    if y == 0.0 {
                        match edge_sign(e) {
                            EdgeClass::Zero => return f64::NEG_INFINITY,
                            EdgeClass::Infinite => return f64::INFINITY,
                            EdgeClass::Finite => continue,
                        }
                    }
                    acc += e * y.ln() - nu * y * y;
                }
                acc + n * (2f64.ln() + nu * nu.ln() - special::ln_gamma(nu) - ln_s)
            }
            Family::Gamma => {
                let a = self.shapes[0];
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    if y < 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    if y == 0.0 {
                        match edge_sign(a - 1.0) {
                            EdgeClass::Zero => return f64::NEG_INFINITY,
                            EdgeClass::Infinite => return f64::INFINITY,
                            EdgeClass::Finite => continue,
                        }
                    }
                    acc += (a - 1.0) * y.ln() - y;
                }
                acc - n * (special::ln_gamma(a) + ln_s)
            }
            Family::Beta => {
                let (a, b) = (self.shapes[0], self.shapes[1]);
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    if !(0.0..=1.0).contains(&y) {
                        return f64::NEG_INFINITY;
                    }
                    if y == 0.0 || y == 1.0 {
                        let exponent = if y == 0.0 { a - 1.0 } else { b - 1.0 };
                        match edge_sign(exponent) {
                            EdgeClass::Zero => return f64::NEG_INFINITY,
                            EdgeClass::Infinite => return f64::INFINITY,
                            EdgeClass::Finite => continue,
                        }
                    }
                    acc += (a - 1.0) * y.ln() + (b - 1.0) * (1.0 - y).ln();
                }
                acc - n * (special::ln_beta(a, b) + ln_s)
            }
            Family::LogLogistic => {
                let c = self.shapes[0];
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    if y < 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    if y == 0.0 {
                        match edge_sign(c - 1.0) {
                            EdgeClass::Zero => return f64::NEG_INFINITY,
                            EdgeClass::Infinite => return f64::INFINITY,
                            EdgeClass::Finite => continue,
                        }
                    }
                    acc += (c - 1.0) * y.ln() - 2.0 * ln1p_exp(c * y.ln());
                }
                acc + n * (c.ln() - ln_s)
            }
            Family::Weibull => {
                let c = self.shapes[0];
                let mut acc = 0.0;
                for &x in data {
                    let y = (x - loc) * inv_s;
                    if y < 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    if y == 0.0 {
                        match edge_sign(c - 1.0) {
                            EdgeClass::Zero => return f64::NEG_INFINITY,
                            EdgeClass::Infinite => return f64::INFINITY,
                            EdgeClass::Finite => continue,
                        }
                    }
                    acc += (c - 1.0) * y.ln() - y.powf(c);
                }
                acc + n * (c.ln() - ln_s)
            }
        }
    }
}

/// Behavior of `y^e` terms at a support edge (y = 0 or the Beta upper
/// edge).
enum EdgeClass {
    /// Exponent positive: the density factor vanishes.
    Zero,
    /// Exponent negative: the density diverges.
    Infinite,
    /// Exponent exactly zero: the factor is 1.
    Finite,
}

fn edge_sign(exponent: f64) -> EdgeClass {
    if exponent > 0.0 {
        EdgeClass::Zero
    } else if exponent < 0.0 {
        EdgeClass::Infinite
    } else {
        EdgeClass::Finite
    }
}

/// Log density value at a support edge for a density proportional to
/// `y^exponent`: -inf when the factor vanishes, +inf when it diverges, and
/// the finite remainder (supplied by `rest`) when the exponent is 0.
fn edge_power(exponent: f64, rest: impl Fn(()) -> f64) -> f64 {
    match edge_sign(exponent) {
        EdgeClass::Zero => f64::NEG_INFINITY,
        EdgeClass::Infinite => f64::INFINITY,
        EdgeClass::Finite => rest(()),
    }
}

/// ln(1 + e^t) without overflow for large |t|.
fn ln1p_exp(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Rician unit CDF via the Poisson mixture of Erlang CDFs:
/// F(y) = sum_k pois(k; b^2/2) P(k+1, y^2/2).
///
/// The sum starts at the Poisson mode and expands outward with stable
/// recurrences for both the weights and the incomplete-gamma values, so
/// only one `gamma_p` evaluation is needed per call.
fn rician_unit_cdf(b: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let u = y * y / 2.0;
    let mu = b * b / 2.0;
    if mu == 0.0 {
        return -(-u).exp_m1();
    }
    let k0 = mu.floor();
    let ln_w0 = if k0 == 0.0 {
        -mu
    } else {
        k0 * mu.ln() - mu - special::ln_gamma(k0 + 1.0)
    };
    let w0 = ln_w0.exp();
    let g0 = special::gamma_p(k0 + 1.0, u);
    // t_j = u^j e^{-u} / j!, the step between consecutive P(j, u) values.
    let t0 = (k0 * u.ln() - u - special::ln_gamma(k0 + 1.0)).exp();

    let mut acc = w0 * g0;
    const W_EPS: f64 = 1e-18;

    // Upward from the mode: P(k+2, u) = P(k+1, u) - t_{k+1}.
    let mut w = w0;
    let mut g = g0;
    let mut t = t0 * u / (k0 + 1.0);
    let mut k = k0;
    while w > W_EPS && k < k0 + 20_000.0 {
        w *= mu / (k + 1.0);
        g = (g - t).clamp(0.0, 1.0);
        t *= u / (k + 2.0);
        acc += w * g;
        k += 1.0;
    }

    // Downward from the mode: P(k, u) = P(k+1, u) + t_k.
    let mut w = w0;
    let mut g = g0;
    let mut t = t0;
    let mut k = k0;
    while k > 0.0 && w > W_EPS {
        w *= k / mu;
        g = (g + t).clamp(0.0, 1.0);
        t *= k / u;
        acc += w * g;
        k -= 1.0;
    }

    acc.clamp(0.0, 1.0)
}
