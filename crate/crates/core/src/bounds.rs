//! Two-sided bounds for the Poisson entropies (λ > 1).
//!
//! * Shannon, Rényi and both generalized Rényi entropies share the lower
//!   bound `L(λ) = ½ ln(2πλ) − h(λ)`, derived from the maximal-probability
//!   estimate `μ(λ) < e^{h(λ)} / √(2πλ)`.
//! * Shannon has the upper bound `U_SH(λ) = ½ ln(2πλ) + 1 + 1/(6λ)`.
//! * Rényi has upper bounds through the Mittag–Leffler function, valid for
//!   every γ ∈ [γ*, 1).
//! * Tsallis and Sharma–Mittal are bounded below through μ(λ) and, for
//!   orders above one, above by 1/(α − 1) resp. 1/(β − 1).

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::entropies::{self, EntropyKind, ORDER_EPS};
use crate::error::{domain, EntropyError, Result};
use crate::mittag_leffler::log_ml;
use crate::series::{check_lambda, check_order, poisson_log_pmf, poisson_mode, SeriesConfig};

/// Largest γ accepted by the Rényi upper bound.
pub const GAMMA_MAX: f64 = 1.0 - 1e-6;

/// γ* = exp(−(π/e)(e^{1/6} − 1)) ≈ 0.811.
pub fn gamma_star() -> f64 {
    (-(PI / E) * ((1.0f64 / 6.0).exp() - 1.0)).exp()
}

/// Constants of a Mittag–Leffler bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MlConstants {
    pub gamma: f64,
    /// C₁(α, γ) for α < 1, C₂(α, γ) for α > 1.
    pub c: f64,
    pub d: f64,
}

/// Lower and (optional) upper bound of one entropy at one intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    pub lower: f64,
    pub upper: Option<f64>,
    pub constants: Option<MlConstants>,
}

impl BoundSet {
    fn new(lower: f64, upper: Option<f64>, constants: Option<MlConstants>) -> Self {
        if let Some(u) = upper {
            assert!(lower <= u, "bound set with lower {lower} above upper {u}");
        }
        Self {
            lower,
            upper,
            constants,
        }
    }

    /// lower < value and, when present, value < upper.
    pub fn contains(&self, value: f64) -> bool {
        self.lower < value && self.upper.is_none_or(|u| value < u)
    }
}

fn check_lambda_gt_one(lambda: f64) -> Result<()> {
    if !(lambda > 1.0) || !lambda.is_finite() {
        return domain(format!("bounds need lambda > 1, got {lambda}"));
    }
    Ok(())
}

fn check_not_one(name: &str, v: f64) -> Result<()> {
    if (v - 1.0).abs() <= ORDER_EPS {
        return Err(EntropyError::DegenerateOrder(format!(
            "{name} must differ from 1, got {v}"
        )));
    }
    Ok(())
}

/// μ(λ) = max_i p_i(λ) = λ^{⌊λ⌋} e^{−λ} / ⌊λ⌋!.
pub fn max_prob(lambda: f64) -> Result<f64> {
    Ok(poisson_log_pmf(poisson_mode(lambda), lambda)?.exp())
}

/// h(λ) = ½ ln(1 + 1/max(λ − 1, 1)) − 1/(12λ + 1).
///
/// Positive for λ above (1/(½ ln 2) − 1)/12 ≈ 0.157, in particular on the
/// whole bound domain λ > 1.
pub fn h_correction(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(0.5 * (1.0 / (lambda - 1.0).max(1.0)).ln_1p() - 1.0 / (12.0 * lambda + 1.0))
}

/// L(λ) = ½ ln(2πλ) − h(λ): a lower bound for the Shannon, Rényi and both
/// generalized Rényi entropies.
pub fn lower_bound_log_family(lambda: f64) -> Result<f64> {
    check_lambda_gt_one(lambda)?;
    Ok(0.5 * (2.0 * PI * lambda).ln() - h_correction(lambda)?)
}

/// U_SH(λ) = ½ ln(2πλ) + 1 + 1/(6λ).
pub fn upper_bound_shannon(lambda: f64) -> Result<f64> {
    check_lambda_gt_one(lambda)?;
    Ok(0.5 * (2.0 * PI * lambda).ln() + 1.0 + 1.0 / (6.0 * lambda))
}

fn check_gamma(gamma: f64) -> Result<()> {
    let min = gamma_star();
    if !(gamma >= min && gamma <= GAMMA_MAX) {
        return Err(EntropyError::GammaOutOfRange {
            gamma,
            min,
            max: GAMMA_MAX,
        });
    }
    Ok(())
}

/// D(α, γ) = (π|α − 1| / (−e α ln γ))^{|α−1|/2}.
pub fn d_constant(alpha: f64, gamma: f64) -> f64 {
    let b = (alpha - 1.0).abs();
    (PI * b / (-E * alpha * gamma.ln())).powf(0.5 * b)
}

/// C₁(α, γ) = √α e^{1/(12α)} D(α, γ), used for α < 1.
pub fn c1_constant(alpha: f64, gamma: f64) -> f64 {
    alpha.sqrt() * (1.0 / (12.0 * alpha)).exp() * d_constant(alpha, gamma)
}

/// C₂(α, γ) = √α e^{−α/12} / D(α, γ), used for α > 1.
pub fn c2_constant(alpha: f64, gamma: f64) -> f64 {
    alpha.sqrt() * (-alpha / 12.0).exp() / d_constant(alpha, gamma)
}

/// Rényi upper bound U_R(α, λ, γ).
///
/// ```text
/// α < 1: (ln E_α((αλ/γ)^α) − αλ)/(1 − α) + ½ ln(π/(−e ln γ))
///        + α ln α/(2(1 − α)) + 1/(12α(1 − α)) + ½ ln(1 − α)
/// α > 1: (αλ − ln E_α((αγλ)^α))/(α − 1) + ½ ln(π/(−e ln γ))
///        − α ln α/(2(α − 1)) + α/(12(α − 1)) + ½ ln(α − 1)
/// ```
pub fn upper_bound_renyi(alpha: f64, lambda: f64, gamma: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_lambda_gt_one(lambda)?;
    check_order("alpha", alpha)?;
    check_not_one("alpha", alpha)?;
    check_gamma(gamma)?;
    let common = 0.5 * (PI / (-E * gamma.ln())).ln();
    if alpha < 1.0 {
        let x = (alpha * lambda / gamma).powf(alpha);
        let one_m = 1.0 - alpha;
        Ok((log_ml(alpha, x, cfg)? - alpha * lambda) / one_m
            + common
            + alpha * alpha.ln() / (2.0 * one_m)
            + 1.0 / (12.0 * alpha * one_m)
            + 0.5 * one_m.ln())
    } else {
        let x = (alpha * gamma * lambda).powf(alpha);
        let m_one = alpha - 1.0;
        Ok((alpha * lambda - log_ml(alpha, x, cfg)?) / m_one + common
            - alpha * alpha.ln() / (2.0 * m_one)
            + alpha / (12.0 * m_one)
            + 0.5 * m_one.ln())
    }
}

/// Lower bound L(λ) and upper bound U_R(α, λ, γ) of the Rényi entropy.
pub fn renyi_bounds(alpha: f64, lambda: f64, gamma: f64, cfg: &SeriesConfig) -> Result<BoundSet> {
    let upper = upper_bound_renyi(alpha, lambda, gamma, cfg)?;
    let constants = MlConstants {
        gamma,
        c: if alpha < 1.0 {
            c1_constant(alpha, gamma)
        } else {
            c2_constant(alpha, gamma)
        },
        d: d_constant(alpha, gamma),
    };
    Ok(BoundSet::new(
        lower_bound_log_family(lambda)?,
        Some(upper),
        Some(constants),
    ))
}

pub fn shannon_bounds(lambda: f64) -> Result<BoundSet> {
    Ok(BoundSet::new(
        lower_bound_log_family(lambda)?,
        Some(upper_bound_shannon(lambda)?),
        None,
    ))
}

/// Lower bound of Tsallis/Sharma–Mittal type for the order `q` that drives
/// the power of μ(λ): (μ̄^{q−1} − 1)/(1 − q), with the upper estimate μ̄ of μ.
///
/// For q < 1 the factor (2πλ)^{(1−q)/2} e^{−h(λ)} is used; it is below
/// μ^{q−1}. For q > 1 the factor is (2πλ)^{(1−q)/2} e^{(q−1) h(λ)} =
/// (e^{h}/√(2πλ))^{q−1}, which is above μ^{q−1}; the ceiling 1/(q − 1) is
/// the upper bound.
fn power_family_bounds(q: f64, lambda: f64) -> Result<BoundSet> {
    check_lambda_gt_one(lambda)?;
    check_order("order", q)?;
    check_not_one("order", q)?;
    let h = h_correction(lambda)?;
    let power = 0.5 * (1.0 - q) * (2.0 * PI * lambda).ln();
    if q < 1.0 {
        let factor = (power - h).exp();
        Ok(BoundSet::new((factor - 1.0) / (1.0 - q), None, None))
    } else {
        let factor = (power + (q - 1.0) * h).exp();
        Ok(BoundSet::new(
            (1.0 - factor) / (q - 1.0),
            Some(1.0 / (q - 1.0)),
            None,
        ))
    }
}

/// Bounds of the Tsallis entropy of order α at λ > 1.
pub fn tsallis_bounds(alpha: f64, lambda: f64) -> Result<BoundSet> {
    power_family_bounds(alpha, lambda)
}

/// Bounds of the Sharma–Mittal entropy; they depend on β only.
pub fn sharma_mittal_bounds(alpha: f64, beta: f64, lambda: f64) -> Result<BoundSet> {
    check_order("alpha", alpha)?;
    check_not_one("alpha", alpha)?;
    power_family_bounds(beta, lambda)
}

/// Bounds for any entropy kind. `gamma` is only used by the Rényi bound.
pub fn bounds_for(
    kind: EntropyKind,
    alpha: Option<f64>,
    beta: Option<f64>,
    lambda: f64,
    gamma: Option<f64>,
    cfg: &SeriesConfig,
) -> Result<BoundSet> {
    let need = |o: Option<f64>, name: &str| {
        o.ok_or_else(|| EntropyError::Domain(format!("{kind} bounds require {name}")))
    };
    match kind {
        EntropyKind::Shannon => shannon_bounds(lambda),
        EntropyKind::Renyi => {
            let a = need(alpha, "alpha")?;
            let g = gamma.unwrap_or_else(|| gamma_star().max(0.95));
            renyi_bounds(a, lambda, g, cfg)
        }
        EntropyKind::GenRenyi1 | EntropyKind::GenRenyi2 => {
            Ok(BoundSet::new(lower_bound_log_family(lambda)?, None, None))
        }
        EntropyKind::Tsallis => tsallis_bounds(need(alpha, "alpha")?, lambda),
        EntropyKind::SharmaMittal => {
            sharma_mittal_bounds(need(alpha, "alpha")?, need(beta, "beta")?, lambda)
        }
    }
}

/// γ minimising sup over λ of U_R(α, λ, γ) − H_R(α, λ).
///
/// The supremum is taken over 200 log-spaced points of (1, λ_max]; the
/// minimisation is a golden-section search on [γ*, 1 − 1e−6] down to an
/// interval of width 1e−4.
pub fn optimal_gamma(alpha: f64, lambda_max: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_lambda_gt_one(lambda_max)?;
    let grid = log_grid(lambda_max, 200);
    let entropies = grid
        .iter()
        .map(|&l| entropies::renyi(alpha, l, cfg))
        .collect::<Result<Vec<_>>>()?;
    let objective = |g: f64| -> Result<f64> {
        let mut sup = f64::NEG_INFINITY;
        for (&l, &h) in grid.iter().zip(&entropies) {
            sup = sup.max(upper_bound_renyi(alpha, l, g, cfg)? - h);
        }
        Ok(sup)
    };
    golden_section(gamma_star(), GAMMA_MAX, 1e-4, objective)
}

/// Sup-gap of the Rényi upper bound over the optimal_gamma grid.
pub fn renyi_sup_gap(alpha: f64, lambda_max: f64, gamma: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_lambda_gt_one(lambda_max)?;
    let mut sup = f64::NEG_INFINITY;
    for l in log_grid(lambda_max, 200) {
        sup = sup.max(upper_bound_renyi(alpha, l, gamma, cfg)? - entropies::renyi(alpha, l, cfg)?);
    }
    Ok(sup)
}

/// n log-spaced points λ_k = λ_max^{k/n}, k = 1..=n.
fn log_grid(lambda_max: f64, n: usize) -> Vec<f64> {
    let top = lambda_max.ln();
    (1..=n).map(|k| (top * k as f64 / n as f64).exp()).collect()
}

fn golden_section(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}
