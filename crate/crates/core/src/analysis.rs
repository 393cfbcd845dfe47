//! λ-derivatives of the entropies, the function ρ(α) and monotonicity scans.
//!
//! ρ(α) = ∂_λ ln ψ(α, λ) at λ = 1, i.e.
//!
//! ```text
//! ρ(α) = α (Σ_{i≥1} i (i!)^{−α} / Σ_{i≥0} (i!)^{−α} − 1)
//! ```
//!
//! and the slope of the one-order generalized Rényi entropy at λ = 1 is
//! −ρ′(α). A sign change of ρ′ therefore separates orders for which that
//! entropy starts out decreasing from those for which it starts increasing.

use rayon::prelude::*;
use serde::Serialize;

use crate::entropies::{EntropyKind, EntropyQuery, ORDER_EPS};
use crate::error::{domain, EntropyError, Result};
use crate::series::{psi_moments, sum_mode_centered, SeriesConfig};
use crate::special::ln_factorial;

/// Smallest α accepted by [`rho`] and [`rho_prime`].
pub const RHO_MIN_ALPHA: f64 = 1e-6;

/// Derivatives with |d| below this count as flat rather than decreasing.
pub const DEFAULT_DERIV_TOL: f64 = 1e-10;

/// Width in λ to which extrema are refined.
pub const EXTREMUM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoPoint {
    pub alpha: f64,
    pub rho: f64,
    pub rho_prime: f64,
}

fn check_rho_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < RHO_MIN_ALPHA {
        return domain(format!(
            "rho needs finite alpha >= {RHO_MIN_ALPHA:e}, got {alpha}"
        ));
    }
    Ok(())
}

/// E_w[i] and E_w[ln i!] under w_i ∝ (i!)^{−α}.
fn factorial_weighted_means(alpha: f64, cfg: &SeriesConfig) -> Result<(f64, f64)> {
    let sums = sum_mode_centered::<2, _>(0, cfg, |i| {
        let lf = ln_factorial(i);
        (-alpha * lf, [i as f64, lf])
    })?;
    Ok((sums.mean(0), sums.mean(1)))
}

/// ρ(α) for α ≥ 1e−6.
pub fn rho(alpha: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_rho_alpha(alpha)?;
    let (mean_i, _) = factorial_weighted_means(alpha, cfg)?;
    Ok(alpha * (mean_i - 1.0))
}

/// ρ(α) together with ρ′(α).
///
/// With the weights w_i ∝ (i!)^{−α}, ∂_α E_w[i] = −Cov_w(i, ln i!), so
/// ρ′ = E_w[i] − 1 − α Cov_w(i, ln i!). The covariance is summed about the
/// means from a first pass.
pub fn rho_point(alpha: f64, cfg: &SeriesConfig) -> Result<RhoPoint> {
    check_rho_alpha(alpha)?;
    let (mean_i, mean_lf) = factorial_weighted_means(alpha, cfg)?;
    let cov = sum_mode_centered::<1, _>(0, cfg, |i| {
        let lf = ln_factorial(i);
        (-alpha * lf, [(i as f64 - mean_i) * (lf - mean_lf)])
    })?
    .mean(0);
    Ok(RhoPoint {
        alpha,
        rho: alpha * (mean_i - 1.0),
        rho_prime: mean_i - 1.0 - alpha * cov,
    })
}

pub fn rho_prime(alpha: f64, cfg: &SeriesConfig) -> Result<f64> {
    Ok(rho_point(alpha, cfg)?.rho_prime)
}

/// Locates the sign change of ρ′ in (lo, hi) by bisection down to `tol`.
///
/// ρ′ must be positive at `lo` and negative at `hi`.
pub fn rho_prime_root(lo: f64, hi: f64, tol: f64, cfg: &SeriesConfig) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let fa = rho_prime(a, cfg)?;
    let fb = rho_prime(b, cfg)?;
    if !(fa > 0.0 && fb < 0.0) {
        return domain(format!(
            "rho' does not change sign from + to - on [{lo}, {hi}] ({fa:e}, {fb:e})"
        ));
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if rho_prime(m, cfg)? > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Analytic ∂H/∂λ for the entropy and orders of `query` at its λ.
///
/// With ℓ(α) = ln ψ(α, λ) and ℓ_λ its λ-derivative:
///
/// | entropy | ∂H/∂λ |
/// |---------|-------|
/// | Shannon, generalized Rényi (one order) | −∂²ℓ/∂α∂λ |
/// | Rényi | ℓ_λ / (1 − α) |
/// | generalized Rényi (two orders) | (ℓ_λ(α) − ℓ_λ(β)) / (β − α) |
/// | Tsallis | ψ ℓ_λ / (1 − α) |
/// | Sharma–Mittal | ψ^{(1−β)/(1−α)} ℓ_λ / (1 − α) |
pub fn entropy_dlambda(query: &EntropyQuery) -> Result<f64> {
    Ok(value_and_dlambda(query)?.1)
}

/// Entropy value and analytic ∂H/∂λ from the same series pass where the
/// formulas allow it.
pub fn value_and_dlambda(query: &EntropyQuery) -> Result<(f64, f64)> {
    let l = query.lambda();
    let cfg = &query.cfg;
    let a = query.alpha().unwrap_or(1.0);
    match query.kind {
        EntropyKind::Shannon => {
            let m = psi_moments(1.0, l, cfg)?;
            Ok((query.evaluate()?, -m.d2_mixed))
        }
        EntropyKind::GenRenyi1 => {
            if (a - 1.0).abs() <= ORDER_EPS {
                let m = psi_moments(1.0, l, cfg)?;
                return Ok((query.evaluate()?, -m.d2_mixed));
            }
            let m = psi_moments(a, l, cfg)?;
            Ok((-m.dlog_dalpha, -m.d2_mixed))
        }
        EntropyKind::Renyi => {
            let m = psi_moments(a, l, cfg)?;
            Ok((m.log_psi / (1.0 - a), m.dlog_dlambda / (1.0 - a)))
        }
        EntropyKind::GenRenyi2 => {
            let b = query.beta().expect("validated query");
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let m_lo = psi_moments(lo, l, cfg)?;
            let m_hi = psi_moments(hi, l, cfg)?;
            Ok((
                (m_lo.log_psi - m_hi.log_psi) / (hi - lo),
                (m_lo.dlog_dlambda - m_hi.dlog_dlambda) / (hi - lo),
            ))
        }
        EntropyKind::Tsallis => {
            let m = psi_moments(a, l, cfg)?;
            Ok((
                m.log_psi.exp_m1() / (1.0 - a),
                m.log_psi.exp() * m.dlog_dlambda / (1.0 - a),
            ))
        }
        EntropyKind::SharmaMittal => {
            let b = query.beta().expect("validated query");
            let e = (1.0 - b) / (1.0 - a);
            let m = psi_moments(a, l, cfg)?;
            Ok((
                (e * m.log_psi).exp_m1() / (1.0 - b),
                (e * m.log_psi).exp() * m.dlog_dlambda / (1.0 - a),
            ))
        }
    }
}

/// Central finite-difference ∂H/∂λ with step max(1e−6, 1e−6 λ); one-sided
/// when λ is within one step of zero.
pub fn entropy_dlambda_fd(query: &EntropyQuery) -> Result<f64> {
    let l = query.lambda();
    let h = (1e-6 * l).max(1e-6);
    if l > 2.0 * h {
        let up = query.at_lambda(l + h)?.evaluate()?;
        let down = query.at_lambda(l - h)?.evaluate()?;
        Ok((up - down) / (2.0 * h))
    } else {
        let up = query.at_lambda(l + h)?.evaluate()?;
        Ok((up - query.evaluate()?) / h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub lambda: f64,
    pub kind: ExtremumKind,
}

/// Result of a λ-scan of one entropy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub kind: EntropyKind,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Analytic ∂H/∂λ at the grid points.
    pub derivatives: Vec<f64>,
    /// Maximal runs with ∂H/∂λ < −tol; interior endpoints are refined to the
    /// zeros of the derivative.
    pub decreasing_intervals: Vec<(f64, f64)>,
    pub extrema: Vec<Extremum>,
    /// Set when the orders fall in a regime that is monotone increasing by
    /// proof; such reports carry no grid.
    pub proven_monotone: bool,
}

impl ScanReport {
    pub fn minima(&self) -> impl Iterator<Item = f64> + '_ {
        self.extrema
            .iter()
            .filter(|e| e.kind == ExtremumKind::Min)
            .map(|e| e.lambda)
    }

    /// Whether some decreasing interval meets [a, b].
    pub fn decreases_within(&self, a: f64, b: f64) -> bool {
        self.decreasing_intervals
            .iter()
            .any(|&(s, e)| s <= b && e >= a)
    }
}

/// Scan parameters: grid lo + k·step for k ≥ 0 while ≤ hi (up to rounding).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl ScanGrid {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return domain(format!("scan range needs 0 < lo < hi, got [{lo}, {hi}]"));
        }
        if !(step > 0.0 && step.is_finite()) {
            return domain(format!("scan step must be positive, got {step}"));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

/// Evaluates the entropy of `template` and its λ-derivative on `grid` and
/// classifies where it decreases. The λ stored in `template` is ignored.
pub fn scan_monotonicity(template: &EntropyQuery, grid: ScanGrid) -> Result<ScanReport> {
    scan_with_tol(template, grid, DEFAULT_DERIV_TOL)
}

pub fn scan_with_tol(template: &EntropyQuery, grid: ScanGrid, tol: f64) -> Result<ScanReport> {
    let points = grid.points();
    if points.len() < 3 {
        return Err(EntropyError::EmptyGrid(points.len()));
    }
    let evaluated = points
        .par_iter()
        .map(|&l| value_and_dlambda(&template.at_lambda(l)?))
        .collect::<Result<Vec<_>>>()?;
    let (values, derivatives): (Vec<f64>, Vec<f64>) = evaluated.into_iter().unzip();

    let deriv_at = |l: f64| entropy_dlambda(&template.at_lambda(l)?);
    let decreasing = |d: f64| d < -tol;

    let mut extrema = Vec::new();
    for k in 1..points.len() {
        let (d0, d1) = (derivatives[k - 1], derivatives[k]);
        if decreasing(d0) != decreasing(d1) {
            let lambda = refine_crossing(points[k - 1], points[k], decreasing(d0), &deriv_at, tol)?;
            let kind = if decreasing(d0) {
                ExtremumKind::Min
            } else {
                ExtremumKind::Max
            };
            extrema.push(Extremum { lambda, kind });
        }
    }

    let mut decreasing_intervals = Vec::new();
    let mut start: Option<usize> = None;
    for k in 0..=points.len() {
        let dec = k < points.len() && decreasing(derivatives[k]);
        match (dec, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                let left = if s == 0 {
                    points[0]
                } else {
                    crossing_near(&extrema, points[s - 1], points[s])
                };
                let right = if k == points.len() {
                    points[k - 1]
                } else {
                    crossing_near(&extrema, points[k - 1], points[k])
                };
                decreasing_intervals.push((left, right));
                start = None;
            }
            _ => {}
        }
    }

    Ok(ScanReport {
        kind: template.kind,
        alpha: template.alpha(),
        beta: template.beta(),
        grid: points,
        values,
        derivatives,
        decreasing_intervals,
        extrema,
        proven_monotone: false,
    })
}

fn crossing_near(extrema: &[Extremum], a: f64, b: f64) -> f64 {
    extrema
        .iter()
        .map(|e| e.lambda)
        .find(|&l| l >= a && l <= b)
        .expect("every run boundary has a refined crossing")
}

/// Bisection for the point in [a, b] where the "decreasing" state flips.
fn refine_crossing(
    mut a: f64,
    mut b: f64,
    dec_at_a: bool,
    deriv: &impl Fn(f64) -> Result<f64>,
    tol: f64,
) -> Result<f64> {
    while b - a > EXTREMUM_TOL {
        let m = 0.5 * (a + b);
        if (deriv(m)? < -tol) == dec_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Scan of the two-order generalized Rényi entropy.
///
/// When one order is at most 1 and the other exceeds 1 the entropy is known
/// to increase in λ; the report then has `proven_monotone` set and no grid.
pub fn gen_renyi2_anomaly_probe(
    alpha: f64,
    beta: f64,
    grid: ScanGrid,
    cfg: &SeriesConfig,
) -> Result<ScanReport> {
    let params = crate::series::PoissonParams::new(grid.lo)
        .with_alpha(alpha)
        .with_beta(beta);
    let query = EntropyQuery::new(EntropyKind::GenRenyi2, params, *cfg)?;
    let mixed = (alpha <= 1.0) != (beta <= 1.0);
    if mixed {
        return Ok(ScanReport {
            kind: EntropyKind::GenRenyi2,
            alpha: Some(alpha),
            beta: Some(beta),
            grid: Vec::new(),
            values: Vec::new(),
            derivatives: Vec::new(),
            decreasing_intervals: Vec::new(),
            extrema: Vec::new(),
            proven_monotone: true,
        });
    }
    scan_monotonicity(&query, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::PoissonParams;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    fn query(kind: EntropyKind, a: Option<f64>, b: Option<f64>, l: f64) -> EntropyQuery {
        let mut p = PoissonParams::new(l);
        p.alpha = a;
        p.beta = b;
        EntropyQuery::new(kind, p, cfg()).unwrap()
    }

    #[test]
    fn rho_vanishes_at_one() {
        assert!(rho(1.0, &cfg()).unwrap().abs() < 1e-10);
        assert!(rho(0.5, &cfg()).unwrap() > 0.0);
        assert!(rho(1e-7, &cfg()).is_err());
    }

    #[test]
    fn rho_prime_matches_difference_quotient() {
        for &a in &[0.05, 0.3, 0.9, 2.0] {
            let h = 1e-6;
            let fd = (rho(a + h, &cfg()).unwrap() - rho(a - h, &cfg()).unwrap()) / (2.0 * h);
            let an = rho_prime(a, &cfg()).unwrap();
            assert!(
                (an - fd).abs() <= 1e-6 * an.abs().max(1e-3),
                "alpha = {a}: {an} vs {fd}"
            );
        }
    }

    #[test]
    fn analytic_and_fd_slopes_agree() {
        let cases = [
            query(EntropyKind::Shannon, None, None, 3.3),
            query(EntropyKind::Renyi, Some(0.4), None, 7.0),
            query(EntropyKind::GenRenyi1, Some(2.5), None, 1.7),
            query(EntropyKind::GenRenyi2, Some(0.3), Some(4.0), 12.0),
            query(EntropyKind::Tsallis, Some(3.0), None, 0.8),
            query(EntropyKind::SharmaMittal, Some(0.5), Some(2.0), 5.5),
        ];
        for q in &cases {
            let an = entropy_dlambda(q).unwrap();
            let fd = entropy_dlambda_fd(q).unwrap();
            assert!(
                (an - fd).abs() <= 1e-5 * an.abs(),
                "{:?}: {an} vs {fd}",
                q.kind
            );
            let (v, _) = value_and_dlambda(q).unwrap();
            assert!((v - q.evaluate().unwrap()).abs() <= 1e-13 * v.abs());
        }
    }

    #[test]
    fn slope_signs_at_one() {
        assert!(entropy_dlambda(&query(EntropyKind::Shannon, None, None, 1.0)).unwrap() > 0.0);
        assert!(
            entropy_dlambda(&query(EntropyKind::GenRenyi1, Some(0.1), None, 1.0)).unwrap() < 0.0
        );
    }

    #[test]
    fn grid_construction() {
        assert_eq!(ScanGrid::new(0.1, 0.3, 0.1).unwrap().points().len(), 3);
        assert!(ScanGrid::new(0.0, 1.0, 0.1).is_err());
        assert!(ScanGrid::new(2.0, 1.0, 0.1).is_err());
        let q = query(EntropyKind::Shannon, None, None, 1.0);
        let g = ScanGrid::new(1.0, 1.1, 0.1).unwrap();
        assert_eq!(scan_monotonicity(&q, g), Err(EntropyError::EmptyGrid(2)));
    }

    #[test]
    fn shannon_scan_is_monotone() {
        let q = query(EntropyKind::Shannon, None, None, 1.0);
        let r = scan_monotonicity(&q, ScanGrid::new(0.05, 30.0, 0.05).unwrap()).unwrap();
        assert!(r.decreasing_intervals.is_empty());
        assert!(r.extrema.is_empty());
        assert_eq!(r.grid.len(), r.values.len());
        assert!(r.grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mixed_regime_probe_is_proven() {
        let g = ScanGrid::new(0.1, 50.0, 0.01).unwrap();
        let r = gen_renyi2_anomaly_probe(0.5, 2.0, g, &cfg()).unwrap();
        assert!(r.proven_monotone && r.decreasing_intervals.is_empty());
    }
}
