//! C-style `%.{p}g` number formatting for CSV output.
//!
//! The value is rounded to `p` significant digits. With X the decimal
//! exponent of the rounded value, fixed notation is used for −4 ≤ X < p and
//! exponential notation otherwise. Trailing zeros of the fraction are
//! removed, and exponents carry a sign and at least two digits (`1.5e-07`).

/// Formats `v` like C's `printf("%.{precision}g", v)`.
pub fn format_g(v: f64, precision: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = precision.max(1);
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponential formatting");
    let x: i32 = exp.parse().expect("integer exponent");
    if x < -4 || x >= p as i32 {
        let m = strip_zeros(mantissa);
        let sign = if x < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", x.abs())
    } else {
        let decimals = (p as i32 - 1 - x).max(0) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds `v` to `precision` significant digits (used for JSON output).
pub fn round_sig(v: f64, precision: usize) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", precision.max(1) - 1, v)
        .parse()
        .expect("round trip of formatted float")
}
