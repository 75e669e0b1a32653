//! Significant-digit formatting for the CSV and JSON emitters.
//!
//! Data files carry nine significant digits and report parameters six;
//! both writers round through [`round_sig`] before serializing, so JSON
//! and CSV outputs of the same run are value-equivalent by construction.

/// Formats `x` with `digits` significant digits, positional where the
/// exponent is moderate and scientific otherwise, with trailing zeros
/// trimmed. `digits` must be in 1..=17.
pub fn format_sig(x: f64, digits: u32) -> String {
    assert!((1..=17).contains(&digits), "digits out of range: {digits}");
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }

    let sci = format!("{:.*e}", digits as usize - 1, x.abs());
    let (mantissa, exponent) = sci
        .split_once('e')
        .expect("float scientific form always has an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    let digit_chars: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let body = if (-5..=17).contains(&exponent) {
        positional(&digit_chars, exponent)
    } else {
        format!("{}e{}", trim_zeros(&insert_point(&digit_chars, 1)), exponent)
    };
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

/// Rounds `x` to `digits` significant digits by a string round trip.
pub fn round_sig(x: f64, digits: u32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format_sig(x, digits)
        .parse()
        .expect("format_sig output is a valid float literal")
}

/// Lays out `digit_chars` (no decimal point) so the leading digit sits at
/// power-of-ten position `exponent`, then trims trailing zeros.
fn positional(digit_chars: &str, exponent: i32) -> String {
    let point = exponent + 1; // digits before the decimal point
    let raw = if point <= 0 {
        format!("0.{}{}", "0".repeat(-point as usize), digit_chars)
    } else if (point as usize) >= digit_chars.len() {
        format!(
            "{}{}",
            digit_chars,
            "0".repeat(point as usize - digit_chars.len())
        )
    } else {
        insert_point(digit_chars, point as usize)
    };
    trim_zeros(&raw)
}

fn insert_point(digit_chars: &str, at: usize) -> String {
    format!("{}.{}", &digit_chars[..at], &digit_chars[at..])
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
