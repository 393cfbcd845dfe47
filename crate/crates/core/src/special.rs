//! Log-gamma and log-factorial.
//!
//! Integer arguments up to 20 come from an exact factorial table. Everything
//! else uses the Stirling series, after shifting small arguments up with the
//! recurrence Γ(x + 1) = x Γ(x).

use std::f64::consts::PI;

const FACTORIALS: [u64; 21] = [
    1,
    1,
    2,
    6,
    24,
    120,
    720,
    5_040,
    40_320,
    362_880,
    3_628_800,
    39_916_800,
    479_001_600,
    6_227_020_800,
    87_178_291_200,
    1_307_674_368_000,
    20_922_789_888_000,
    355_687_428_096_000,
    6_402_373_705_728_000,
    121_645_100_408_832_000,
    2_432_902_008_176_640_000,
];

/// Below this argument the Stirling series is not used directly.
const STIRLING_MIN: f64 = 12.0;

// Bernoulli coefficients B_{2k} / (2k (2k − 1)) for k = 1..7.
const STIRLING_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING_COEFFS {
        series += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// ln Γ(x) for x > 0. Returns NaN for non-positive or NaN input.
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if x.fract() == 0.0 && x <= 21.0 {
        return ln_factorial(x as u64 - 1);
    }
    if x >= STIRLING_MIN {
        return ln_gamma_stirling(x);
    }
    // Γ(x) = Γ(x + k) / (x (x + 1) ... (x + k − 1))
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    ln_gamma_stirling(shifted) - prod.ln()
}

/// ln(n!).
pub fn ln_factorial(n: u64) -> f64 {
    match FACTORIALS.get(n as usize) {
        Some(&f) => (f as f64).ln(),
        None => ln_gamma_stirling(n as f64 + 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_table_matches_running_sum() {
        let mut acc = 0.0f64;
        for n in 1..=20u64 {
            acc += (n as f64).ln();
            assert!((ln_factorial(n) - acc).abs() < 1e-13, "n = {n}");
        }
        assert_eq!(ln_factorial(0), 0.0);
    }

    #[test]
    fn stirling_continues_the_table() {
        // ln 21! and ln 30! from the exact integers.
        let ln21 = ln_factorial(20) + 21f64.ln();
        assert!((ln_factorial(21) - ln21).abs() < 1e-13);
        let ln30 = (21..=30).map(|k| (k as f64).ln()).sum::<f64>() + ln_factorial(20);
        assert!((ln_factorial(30) - ln30).abs() / ln30 < 1e-14);
    }

    #[test]
    fn half_integer_values() {
        // Γ(1/2) = √π, Γ(5/2) = 3√π/4
        let sqrt_pi_ln = 0.5 * PI.ln();
        assert!((ln_gamma(0.5) - sqrt_pi_ln).abs() < 1e-14);
        assert!((ln_gamma(2.5) - (0.75f64.ln() + sqrt_pi_ln)).abs() < 1e-14);
        assert!((ln_gamma(12.5) - (ln_gamma(11.5) + 11.5f64.ln())).abs() < 1e-13);
    }

    #[test]
    fn recurrence_holds_across_branches() {
        for &x in &[0.1, 0.7, 1.3, 3.9, 9.99, 11.5, 11.99, 40.25, 1e5 + 0.5] {
            let lhs = ln_gamma(x + 1.0);
            let rhs = ln_gamma(x) + f64::ln(x);
            assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn huge_arguments_stay_finite() {
        let v = ln_factorial(1_000_000_000);
        assert!(v.is_finite() && v > 1.9e10);
        assert!(ln_gamma(-1.0).is_nan());
        assert!(ln_gamma(0.0).is_nan());
    }
}
