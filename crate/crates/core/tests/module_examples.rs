//! Worked examples for the bounds, asymptotics and analysis modules.

mod common;

use std::f64::consts::PI;

use common::{load_golden, log_grid};
use poisson_entropy::analysis::{
    entropy_dlambda, entropy_dlambda_fd, gen_renyi2_anomaly_probe, rho, rho_point,
    scan_monotonicity, ScanGrid,
};
use poisson_entropy::asymptotics::{
    gen_renyi2_asymptote, psi_asymptote, renyi_asymptote, shannon_asymptote,
    sharma_mittal_asymptote, tsallis_asymptote,
};
use poisson_entropy::bounds::{
    gamma_star, h_correction, lower_bound_log_family, optimal_gamma, renyi_sup_gap, tsallis_bounds,
    upper_bound_renyi, upper_bound_shannon, GAMMA_MAX,
};
use poisson_entropy::entropies::{self, EntropyKind, EntropyQuery};
use poisson_entropy::series::psi;
use poisson_entropy::{PoissonParams, SeriesConfig};

fn cfg() -> SeriesConfig {
    SeriesConfig::default()
}

fn golden(op: &str, alpha: Option<f64>, lambda: Option<f64>) -> f64 {
    load_golden("examples_golden.csv")
        .into_iter()
        .find(|c| c.op == op && c.alpha == alpha && c.lambda == lambda)
        .unwrap_or_else(|| panic!("no golden row for {op} {alpha:?} {lambda:?}"))
        .value
}

fn gr1(alpha: f64) -> EntropyQuery {
    EntropyQuery::new(
        EntropyKind::GenRenyi1,
        PoissonParams::new(1.0).with_alpha(alpha),
        cfg(),
    )
    .unwrap()
}

#[test]
fn h_is_positive_on_log_grid() {
    for l in log_grid(1.0, 1000.0, 100) {
        assert!(h_correction(l).unwrap() > 0.0);
    }
    // Below λ ≈ 0.157 the subtracted 1/(12λ + 1) wins.
    let zero = (2.0 / 2f64.ln() - 1.0) / 12.0;
    assert!(h_correction(zero * 1.001).unwrap() > 0.0);
    assert!(h_correction(zero * 0.999).unwrap() < 0.0);
    assert!(h_correction(0.1).unwrap() < 0.0);
}

#[test]
fn shannon_gap_shrinks() {
    let gap = |l: f64| upper_bound_shannon(l).unwrap() - lower_bound_log_family(l).unwrap();
    assert!(gap(100.0) < gap(2.0) + 0.01);
    let grid = log_grid(1.0, 100.0, 50);
    assert!(grid.windows(2).all(|w| gap(w[1]) < gap(w[0])));
}

#[test]
fn lower_over_asymptote_tends_to_one() {
    let ratio = |l: f64| lower_bound_log_family(l).unwrap() / shannon_asymptote(l).unwrap();
    // The gap 1/2 + h(λ) is fixed while both grow like ½ ln λ.
    let grid = log_grid(2.0, 1e12, 40);
    assert!(grid.windows(2).all(|w| ratio(w[0]) < ratio(w[1])));
    assert!(ratio(1e12) < 1.0 && ratio(1e12) > 0.96);
}

#[test]
fn renyi_upper_bound_dominates() {
    for l in log_grid(1.0, 20.0, 60) {
        let u = upper_bound_renyi(0.5, l, 0.95, &cfg()).unwrap();
        assert!(
            u > entropies::renyi(0.5, l, &cfg()).unwrap(),
            "lambda = {l}"
        );
    }
}

#[test]
fn compositional_renyi_bound_values() {
    let u = upper_bound_renyi(2.0, 5.0, 0.9, &cfg()).unwrap();
    assert!((u / golden("upper_bound_renyi", Some(2.0), Some(5.0)) - 1.0).abs() < 1e-10);
    assert!((gamma_star() / golden("gamma_star", None, None) - 1.0).abs() < 1e-14);
}

#[test]
fn optimal_gamma_beats_endpoints() {
    let g = optimal_gamma(0.5, 20.0, &cfg()).unwrap();
    assert!(g >= gamma_star() && g <= GAMMA_MAX);
    let gap = |x: f64| renyi_sup_gap(0.5, 20.0, x, &cfg()).unwrap();
    assert!(gap(g) <= gap(gamma_star()) + 1e-12);
    assert!(gap(g) <= gap(0.999) + 1e-12);
    // Deterministic for a fixed grid.
    assert_eq!(g, optimal_gamma(0.5, 20.0, &cfg()).unwrap());
}

#[test]
fn tsallis_bound_examples() {
    let b = tsallis_bounds(2.0, 10.0).unwrap();
    let t = entropies::tsallis(2.0, 10.0, &cfg()).unwrap();
    assert!(b.lower < t && t < 1.0);
    let lower = tsallis_bounds(0.5, 4.0).unwrap().lower;
    assert!((lower / golden("tsallis_lower_bound", Some(0.5), Some(4.0)) - 1.0).abs() < 1e-12);
}

#[test]
fn asymptote_examples() {
    let rel = |a: f64, b: f64| (a / b - 1.0).abs();
    assert!(
        rel(
            psi_asymptote(0.5, 200.0).unwrap(),
            psi(0.5, 200.0, &cfg()).unwrap().value
        ) < 0.01
    );
    assert!(
        rel(
            shannon_asymptote(50.0).unwrap(),
            golden("shannon", None, Some(50.0))
        ) < 0.005
    );
    assert!(
        rel(
            renyi_asymptote(2.0, 50.0).unwrap(),
            golden("renyi", Some(2.0), Some(50.0))
        ) < 0.005
    );
    assert!(
        rel(
            gen_renyi2_asymptote(0.5, 2.0, 100.0).unwrap(),
            golden("gen_renyi2", Some(0.5), Some(100.0))
        ) < 0.01
    );
    assert_eq!(tsallis_asymptote(2.0, 123.0).unwrap(), 1.0);
    // The power-law Tsallis form differs from the entropy by the additive
    // −1/(1 − α), which is still 13% of the value at λ = 200.
    let t = golden("tsallis", Some(0.5), Some(200.0));
    let a = tsallis_asymptote(0.5, 200.0).unwrap();
    assert!(rel(a, t) > 0.1 && rel(a - 2.0, t) < 0.01);
    let r = sharma_mittal_asymptote(2.0, 0.5, 400.0).unwrap()
        / sharma_mittal_asymptote(2.0, 0.5, 100.0).unwrap();
    assert!((r - 4f64.powf(0.25)).abs() < 1e-12);
}

#[test]
fn log_growth_ratios_approach_one() {
    let c = cfg();
    let grid = [50.0, 100.0, 200.0, 400.0];
    for a in [0.3, 0.5, 2.0, 4.0] {
        let errs: Vec<f64> = grid
            .iter()
            .map(|&l| {
                (entropies::renyi(a, l, &c).unwrap() / renyi_asymptote(a, l).unwrap() - 1.0).abs()
            })
            .collect();
        assert!(
            errs.windows(2).all(|w| w[1] < w[0]),
            "alpha = {a}: {errs:?}"
        );
        assert!(errs[3] < 0.02);
    }
}

#[test]
fn rho_examples() {
    let c = cfg();
    let half = rho(0.5, &c).unwrap();
    assert!(half > 0.0);
    let tiny = rho(1e-5, &c).unwrap();
    assert!(tiny > 0.0 && tiny < half);
    for k in 1..50 {
        assert!(rho(k as f64 / 50.0, &c).unwrap() > 0.0);
    }
    assert!(rho_point(0.05, &c).unwrap().rho_prime > 0.0);
    assert!(rho_point(0.5, &c).unwrap().rho_prime < 0.0);
    let want = golden("rho_prime", Some(0.3), None);
    assert!((rho_point(0.3, &c).unwrap().rho_prime / want - 1.0).abs() < 1e-8);
}

#[test]
fn slopes_and_fallback() {
    let q = gr1(15.0);
    for l in [1.0, 1.05, 1.1, 1.5, 2.0, 2.05, 3.0, 3.1, 4.0] {
        let q = q.at_lambda(l).unwrap();
        let an = entropy_dlambda(&q).unwrap();
        assert!(an > 0.0, "lambda = {l}");
        let fd = entropy_dlambda_fd(&q).unwrap();
        assert!((an - fd).abs() <= 1e-5 * an.abs());
    }
}

#[test]
fn gen_renyi1_at_fifteen_never_decreases() {
    let r = scan_monotonicity(&gr1(15.0), ScanGrid::new(0.5, 6.0, 0.001).unwrap()).unwrap();
    assert!(
        r.decreasing_intervals.is_empty(),
        "{:?}",
        r.decreasing_intervals
    );
}

#[test]
fn scan_report_invariants() {
    let r = scan_monotonicity(&gr1(100.0), ScanGrid::new(1.0, 3.2, 0.001).unwrap()).unwrap();
    assert_eq!(r.grid.len(), r.values.len());
    assert_eq!(r.grid.len(), r.derivatives.len());
    assert!(r.grid.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(r.decreasing_intervals.len(), 3);
    for &(s, e) in &r.decreasing_intervals {
        let mid = gr1(100.0).at_lambda(0.5 * (s + e)).unwrap();
        assert!(entropy_dlambda(&mid).unwrap() < -1e-10);
    }
    // Minima close each dip, maxima open it.
    assert_eq!(r.minima().count(), 3);
    assert_eq!(r.extrema.len(), 6);
}

#[test]
fn tsallis_two_has_no_dips() {
    let q = EntropyQuery::new(
        EntropyKind::Tsallis,
        PoissonParams::new(1.0).with_alpha(2.0),
        cfg(),
    )
    .unwrap();
    let r = scan_monotonicity(&q, ScanGrid::new(0.05, 100.0, 0.05).unwrap()).unwrap();
    assert!(r.decreasing_intervals.is_empty());
}

#[test]
fn probe_is_symmetric_in_orders() {
    let g = ScanGrid::new(0.05, 150.0, 0.05).unwrap();
    let a = gen_renyi2_anomaly_probe(0.02, 0.01, g, &cfg()).unwrap();
    let b = gen_renyi2_anomaly_probe(0.01, 0.02, g, &cfg()).unwrap();
    assert_eq!(a.values, b.values);
    assert_eq!(a.derivatives, b.derivatives);
    assert_eq!(a.decreasing_intervals, b.decreasing_intervals);
    assert_eq!(a.extrema, b.extrema);
    let mixed = gen_renyi2_anomaly_probe(2.0, 0.5, g, &cfg()).unwrap();
    assert!(mixed.proven_monotone && mixed.grid.is_empty());
}

#[test]
fn saddle_point_closed_form() {
    let want = 1.0 / (2f64.sqrt() * (200.0 * PI).sqrt());
    assert!((psi_asymptote(2.0, 100.0).unwrap() / want - 1.0).abs() < 1e-14);
}
