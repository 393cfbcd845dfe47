//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use poisson_entropy::analysis::rho_point;
use poisson_entropy::bounds::{gamma_star, tsallis_bounds, upper_bound_renyi};
use poisson_entropy::mittag_leffler::{log_ml, ml};
use poisson_entropy::series::{d2_logpsi_dalpha_dlambda, dpsi_dalpha, dpsi_dlambda, psi};
use poisson_entropy::{entropies, SeriesConfig};

/// One row of a golden CSV file.
#[derive(Debug, Clone)]
pub struct GoldenCase {
    pub op: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub lambda: Option<f64>,
    pub value: f64,
    pub rel_tol: f64,
}

fn opt(s: &str) -> Option<f64> {
    if s.is_empty() {
        None
    } else {
        Some(s.parse().unwrap_or_else(|_| panic!("bad number '{s}'")))
    }
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}

pub fn load_golden(name: &str) -> Vec<GoldenCase> {
    let text = std::fs::read_to_string(data_path(name)).expect("golden file present");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("op,alpha,beta,lambda,value,precision"));
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 6, "malformed golden row '{l}'");
            GoldenCase {
                op: f[0].to_string(),
                alpha: opt(f[1]),
                beta: opt(f[2]),
                lambda: opt(f[3]),
                value: f[4].parse().expect("value"),
                rel_tol: f[5].parse().expect("precision"),
            }
        })
        .collect()
}

/// Library value for a golden case.
pub fn evaluate(case: &GoldenCase, cfg: &SeriesConfig) -> f64 {
    let a = || case.alpha.expect("alpha");
    let b = || case.beta.expect("beta");
    let l = || case.lambda.expect("lambda");
    let r = match case.op.as_str() {
        "psi" => psi(a(), l(), cfg).map(|r| r.value),
        "shannon" => entropies::shannon(l(), cfg),
        "renyi" => entropies::renyi(a(), l(), cfg),
        "gen_renyi1" => entropies::gen_renyi1(a(), l(), cfg),
        "gen_renyi2" => entropies::gen_renyi2(a(), b(), l(), cfg),
        "tsallis" => entropies::tsallis(a(), l(), cfg),
        "sharma_mittal" => entropies::sharma_mittal(a(), b(), l(), cfg),
        "ml" => ml(a(), l(), cfg).map(|r| r.value),
        "log_ml" => log_ml(a(), l(), cfg),
        "rho" => rho_point(a(), cfg).map(|p| p.rho),
        "rho_prime" => rho_point(a(), cfg).map(|p| p.rho_prime),
        "dpsi_dalpha" => dpsi_dalpha(a(), l(), cfg).map(|r| r.value),
        "dpsi_dlambda" => dpsi_dlambda(a(), l(), cfg).map(|r| r.value),
        "d2_logpsi" => d2_logpsi_dalpha_dlambda(a(), l(), cfg),
        // beta column carries γ for this op.
        "upper_bound_renyi" => upper_bound_renyi(a(), l(), b(), cfg),
        "tsallis_lower_bound" => tsallis_bounds(a(), l()).map(|s| s.lower),
        "gamma_star" => Ok(gamma_star()),
        other => panic!("unknown golden op '{other}'"),
    };
    r.unwrap_or_else(|e| panic!("{case:?}: {e}"))
}

/// Relative error, falling back to absolute error for a zero reference.
pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got / want - 1.0).abs()
    }
}

/// Log-spaced points on (lo, hi]: hi^{k/n}-style spacing from lo.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (1..=n)
        .map(|k| (a + (b - a) * k as f64 / n as f64).exp())
        .collect()
}
