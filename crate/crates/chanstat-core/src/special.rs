//! Numeric kernels: log-gamma, regularized incomplete gamma and beta,
//! error function, modified Bessel functions, and the inverse normal CDF.
//!
//! These are implemented here rather than pulled from a numerics crate
//! because the distribution engine needs tight, documented accuracy
//! targets (1e-12 or better over the parameter ranges the fits visit) and
//! log-domain variants (`ln_bessel_i0`) that most general-purpose crates
//! do not expose.
//!
//! All functions are pure `f64 -> f64` and return NaN outside their
//! domain; argument validation with proper errors happens at the
//! distribution API layer.

use std::f64::consts::PI;

/// Relative tolerance for series/continued-fraction termination.
const EPS: f64 = 1e-15;
/// Tiny value guarding Lentz continued-fraction denominators.
const FPMIN: f64 = 1e-300;

/// Lanczos coefficients for g = 7, n = 9 (Godfrey's set, as used by Boost
/// and CPython); relative error below 1e-13 on the positive real axis.
/// Kept verbatim from the published table, including digits beyond f64.
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos argument above 0.5; sin(pi x) > 0
        // on (0, 1) so the logarithm is safe.
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Natural log of the beta function B(a, b), a > 0, b > 0.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    // The negated form also rejects NaN arguments.
    if !(a > 0.0 && x >= 0.0) {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if !(a > 0.0 && x >= 0.0) {
        return f64::NAN;
    }
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

/// Series expansion for P(a, x), effective for x < a + 1.
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut n = 1.0;
    while term.abs() > sum.abs() * EPS && n < 1_000.0 {
        term *= x / (a + n);
        sum += term;
        n += 1.0;
    }
    sum * (a * x.ln() - x - ln_gamma(a)).exp()
}

/// Modified Lentz continued fraction for Q(a, x), effective for x >= a + 1.
fn gamma_q_cf(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h * (a * x.ln() - x - ln_gamma(a)).exp()
}

/// Regularized incomplete beta I_x(a, b) for a > 0, b > 0, 0 <= x <= 1.
pub fn beta_inc(a: f64, b: f64, x: f64) -> f64 {
    if !(a > 0.0 && b > 0.0 && (0.0..=1.0).contains(&x)) {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let front = (a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b)).exp();
    // The continued fraction converges fast for x below the pivot; the
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) covers the other side.
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..300 {
        let m = m as f64;
        let m2 = 2.0 * m;
        // Even step.
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        // Odd step.
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Error function, via the incomplete gamma relation erf(x) = P(1/2, x^2).
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let p = gamma_p(0.5, x * x);
    if x >= 0.0 {
        p
    } else {
        -p
    }
}

/// Complementary error function; accurate in the upper tail where
/// 1 - erf(x) would cancel.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 0.0 {
        if x == 0.0 {
            1.0
        } else {
            gamma_q(0.5, x * x)
        }
    } else {
        2.0 - erfc(-x)
    }
}

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// ln I0(x), the log of the modified Bessel function of order zero,
/// for x >= 0. Power series below 60, asymptotic expansion above; the
/// log form stays finite far beyond where I0 itself overflows.
pub fn ln_bessel_i0(x: f64) -> f64 {
    bessel_ln(x, 0)
}

/// ln I1(x) for x >= 0; `ln_bessel_i1(0)` is -inf since I1(0) = 0.
pub fn ln_bessel_i1(x: f64) -> f64 {
    bessel_ln(x, 1)
}

fn bessel_ln(x: f64, order: u32) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return if order == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if x < 60.0 {
        // I_v(x) = (x/2)^v sum_k (x^2/4)^k / (k! (k+v)!); the sum stays
        // below 1e26 for x < 60, comfortably inside f64 range.
        let q = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let v = order as f64;
        let mut k = 1.0;
        while term > sum * 1e-17 {
            term *= q / (k * (k + v));
            sum += term;
            k += 1.0;
        }
        let prefix = if order == 0 { 0.0 } else { (x / 2.0).ln() };
        prefix + sum.ln()
    } else {
        // Asymptotic expansion I_v(x) ~ e^x / sqrt(2 pi x) * sum_k t_k with
        // t_0 = 1, t_{k+1} = -t_k (mu - (2k+1)^2) / (8 x (k+1)), mu = 4 v^2.
        let mu = 4.0 * (order as f64) * (order as f64);
        let mut term = 1.0_f64;
        let mut sum = 1.0_f64;
        for k in 0..30 {
            let k = k as f64;
            let next = -term * (mu - (2.0 * k + 1.0) * (2.0 * k + 1.0)) / (8.0 * x * (k + 1.0));
            if next.abs() >= term.abs() || next.abs() < sum.abs() * 1e-17 {
                sum += next;
                break;
            }
            term = next;
            sum += term;
        }
        x - 0.5 * (2.0 * PI * x).ln() + sum.ln()
    }
}

/// Inverse standard normal CDF for p in (0, 1).
///
/// Acklam's rational approximation (about 1e-9 absolute) polished by two
/// Halley steps against the erfc-based CDF, giving near machine precision
/// across the full open interval.
// Acklam's published coefficient tables, kept verbatim.
#[allow(clippy::excessive_precision)]
pub fn inv_norm_cdf(p: f64) -> f64 {
    if !(p > 0.0 && p < 1.0) {
        return f64::NAN;
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // Halley refinement: e is the CDF error, u the Newton step scaled by
    // the density; the (1 + x u / 2) factor is the second-order correction.
    for _ in 0..2 {
        let e = norm_cdf(x) - p;
        let u = e * (2.0 * PI).sqrt() * (x * x / 2.0).exp();
        x -= u / (1.0 + x * u / 2.0);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // Reference values in this module were frozen from an independent
    // high-precision evaluation (mpmath/scipy at double precision).

    #[test]
    fn ln_gamma_reference_values() {
        let cases = [
            (0.1, 2.252712651734206),
            (0.5, 0.5723649429247001),
            (0.876, 0.08505569244822647),
            (1.5, -0.12078223763524526),
            (2.5, 0.2846828704729192),
            (3.66, 1.3816352391890998),
            (10.3, 13.482036786138359),
            (59.7, 183.3087899959754),
            (123.456, 469.6055471299295),
        ];
        for (x, want) in cases {
            assert_relative_eq!(ln_gamma(x), want, max_relative = 1e-13);
        }
        // Lanczos is not exact at the integers; allow a few ulps of slack.
        assert_abs_diff_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(2.0), 0.0, epsilon = 1e-14);
        assert!(ln_gamma(-1.0).is_nan());
        assert!(ln_gamma(0.0).is_nan());
    }

    #[test]
    fn gamma_p_reference_values() {
        let cases = [
            (0.5, 0.25, 0.5204998778130466),
            (1.0, 1.0, 0.6321205588285577),
            (3.66, 2.0, 0.19273527174503796),
            (59.7, 59.7, 0.5172123648549142),
            (0.876, 0.3, 0.318684499535171),
            (9.56, 12.0, 0.7985577886846813),
            (0.5, 9.0, 0.9999779095030014),
            (25.0, 30.0, 0.8427579727616085),
        ];
        for (a, x, want) in cases {
            assert_relative_eq!(gamma_p(a, x), want, max_relative = 1e-12);
            assert_relative_eq!(gamma_q(a, x), 1.0 - want, max_relative = 1e-10);
        }
        assert_eq!(gamma_p(2.0, 0.0), 0.0);
        assert!(gamma_p(-1.0, 1.0).is_nan());
    }

    #[test]
    fn beta_inc_reference_values() {
        let cases = [
            (2.0, 3.0, 0.4, 0.5247999999999999),
            (0.5, 0.5, 0.3, 0.36901011956554536),
            (1.04, 2.1, 0.7, 0.9160060322123492),
            (5.0, 1.5, 0.9, 0.7761721343162159),
            (0.876, 9.5, 0.02, 0.22498084311641844),
        ];
        for (a, b, x, want) in cases {
            assert_relative_eq!(beta_inc(a, b, x), want, max_relative = 1e-12);
        }
        assert_eq!(beta_inc(2.0, 3.0, 0.0), 0.0);
        assert_eq!(beta_inc(2.0, 3.0, 1.0), 1.0);
        // Symmetry I_x(a,b) + I_{1-x}(b,a) = 1.
        assert_relative_eq!(
            beta_inc(2.7, 0.9, 0.35) + beta_inc(0.9, 2.7, 0.65),
            1.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn erf_reference_values() {
        let cases = [
            (0.1, 0.1124629160182849),
            (0.5, 0.5204998778130465),
            (1.0, 0.8427007929497148),
            (2.0, 0.9953222650189527),
            (3.5, 0.9999992569016276),
            (-1.5, -0.9661051464753108),
        ];
        for (x, want) in cases {
            assert_relative_eq!(erf(x), want, max_relative = 1e-12);
        }
        let erfc_cases = [
            (1.0, 0.15729920705028516),
            (2.0, 0.004677734981047266),
            (3.5, 7.430983723414129e-07),
            (-1.5, 1.9661051464753108),
        ];
        for (x, want) in erfc_cases {
            assert_relative_eq!(erfc(x), want, max_relative = 1e-12);
        }
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erfc(0.0), 1.0);
    }

    #[test]
    fn ln_bessel_reference_values() {
        let i0_cases = [
            (0.1, 0.002498439233876215),
            (0.5, 0.06154971918548119),
            (2.0, 0.8239935414829562),
            (5.0, 3.3046817758225333),
            (20.0, 17.589610428244274),
            (60.0, 57.035990189655145),
            (80.0, 76.8916205447856),
            (300.0, 296.22958759300224),
            (700.0, 695.8056999984434),
        ];
        for (x, want) in i0_cases {
            assert_relative_eq!(ln_bessel_i0(x), want, max_relative = 1e-12);
        }
        let i1_cases = [
            (0.1, -2.9944825338622048),
            (0.5, -1.3552054470253343),
            (2.0, 0.4641344735461599),
            (5.0, 3.1919420305456754),
            (20.0, 17.563954622519343),
            (60.0, 57.02758632603033),
            (80.0, 76.88533102688245),
            (300.0, 296.2279181400313),
            (700.0, 695.8049852018556),
        ];
        for (x, want) in i1_cases {
            assert_relative_eq!(ln_bessel_i1(x), want, max_relative = 1e-12);
        }
        assert_eq!(ln_bessel_i0(0.0), 0.0);
        assert_eq!(ln_bessel_i1(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn inv_norm_cdf_reference_values() {
        let cases = [
            (0.001, -3.090232306167813),
            (0.025, -1.9599639845400545),
            (0.31, -0.4958503473474533),
            (0.5, 0.0),
            (0.975, 1.959963984540054),
            (0.9999, 3.719016485455709),
        ];
        for (p, want) in cases {
            if want == 0.0 {
                assert!(inv_norm_cdf(p).abs() < 1e-15);
            } else {
                assert_relative_eq!(inv_norm_cdf(p), want, max_relative = 1e-11);
            }
        }
        // Extreme tails: absolute agreement is what matters for quantile
        // round trips; the CDF derivative there is ~1e-9.
        assert_relative_eq!(inv_norm_cdf(1e-9), -5.9978070150076865, max_relative = 1e-9);
        assert!((inv_norm_cdf(1.0 - 1e-9) - 5.997807019601637).abs() < 1e-7);
        assert!(inv_norm_cdf(0.0).is_nan());
        assert!(inv_norm_cdf(1.0).is_nan());
    }

    #[test]
    fn norm_cdf_round_trips_inverse() {
        for &p in &[1e-8, 1e-4, 0.1, 0.31, 0.5, 0.77, 0.9999, 1.0 - 1e-8] {
            let x = inv_norm_cdf(p);
            assert_relative_eq!(norm_cdf(x), p, max_relative = 1e-12);
        }
    }
}
