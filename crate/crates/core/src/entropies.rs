//! The six entropies of the Poisson distribution.
//!
//! All but Shannon are closed forms in ψ(α, λ) = Σ p_i^α:
//!
//! | entropy | formula |
//! |---------|---------|
//! | Rényi | ln ψ(α) / (1 − α) |
//! | generalized Rényi, one order | −∂_α ln ψ(α) |
//! | generalized Rényi, two orders | (ln ψ(α) − ln ψ(β)) / (β − α) |
//! | Tsallis | (ψ(α) − 1) / (1 − α) |
//! | Sharma–Mittal | (ψ(α)^{(1−β)/(1−α)} − 1) / (1 − β) |
//!
//! Shannon is −Σ p_i ln p_i, summed with the logarithms centred at the mode.
//!
//! Everything goes through ln ψ, so the entropies stay finite when ψ itself
//! under- or overflows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, EntropyError, Result};
use crate::series::{check_lambda, check_order, psi, psi_moments, PoissonParams, SeriesConfig};

/// Orders closer than this to a singular value are rejected.
pub const ORDER_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyKind {
    Shannon,
    Renyi,
    GenRenyi1,
    GenRenyi2,
    Tsallis,
    SharmaMittal,
}

impl EntropyKind {
    pub const ALL: [EntropyKind; 6] = [
        EntropyKind::Shannon,
        EntropyKind::Renyi,
        EntropyKind::GenRenyi1,
        EntropyKind::GenRenyi2,
        EntropyKind::Tsallis,
        EntropyKind::SharmaMittal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntropyKind::Shannon => "shannon",
            EntropyKind::Renyi => "renyi",
            EntropyKind::GenRenyi1 => "gen_renyi1",
            EntropyKind::GenRenyi2 => "gen_renyi2",
            EntropyKind::Tsallis => "tsallis",
            EntropyKind::SharmaMittal => "sharma_mittal",
        }
    }

    pub fn needs_alpha(self) -> bool {
        !matches!(self, EntropyKind::Shannon)
    }

    pub fn needs_beta(self) -> bool {
        matches!(self, EntropyKind::GenRenyi2 | EntropyKind::SharmaMittal)
    }
}

impl fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntropyKind {
    type Err = EntropyError;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '-'))
            .flat_map(char::to_lowercase)
            .collect();
        Ok(match norm.as_str() {
            "shannon" | "sh" => EntropyKind::Shannon,
            "renyi" | "r" => EntropyKind::Renyi,
            "genrenyi1" | "gr1" => EntropyKind::GenRenyi1,
            "genrenyi2" | "gr2" => EntropyKind::GenRenyi2,
            "tsallis" | "t" => EntropyKind::Tsallis,
            "sharmamittal" | "sm" => EntropyKind::SharmaMittal,
            _ => return domain(format!("unknown entropy kind '{s}'")),
        })
    }
}

/// An entropy value with the diagnostics of the series behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyValue {
    pub value: f64,
    pub terms_used: usize,
    /// Relative truncation estimate of the underlying series.
    pub rel_tail: f64,
}

/// A validated request for one entropy value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyQuery {
    pub kind: EntropyKind,
    pub params: PoissonParams,
    pub cfg: SeriesConfig,
}

impl EntropyQuery {
    pub fn new(kind: EntropyKind, params: PoissonParams, cfg: SeriesConfig) -> Result<Self> {
        params.validate()?;
        match (kind.needs_alpha(), params.alpha) {
            (true, None) => return domain(format!("{kind} requires alpha")),
            (false, Some(_)) => return domain(format!("{kind} takes no alpha")),
            _ => {}
        }
        match (kind.needs_beta(), params.beta) {
            (true, None) => return domain(format!("{kind} requires beta")),
            (false, Some(_)) => return domain(format!("{kind} takes no beta")),
            _ => {}
        }
        let a = params.alpha.unwrap_or(1.0);
        let b = params.beta.unwrap_or(1.0);
        match kind {
            EntropyKind::Renyi | EntropyKind::Tsallis => check_not_one("alpha", a)?,
            EntropyKind::GenRenyi2 => check_distinct(a, b)?,
            EntropyKind::SharmaMittal => {
                check_not_one("alpha", a)?;
                check_not_one("beta", b)?;
            }
            EntropyKind::Shannon | EntropyKind::GenRenyi1 => {}
        }
        Ok(Self { kind, params, cfg })
    }

    pub fn alpha(&self) -> Option<f64> {
        self.params.alpha
    }

    pub fn beta(&self) -> Option<f64> {
        self.params.beta
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    /// The same query at another intensity.
    pub fn at_lambda(&self, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        let mut q = *self;
        q.params.lambda = lambda;
        Ok(q)
    }

    pub fn evaluate(&self) -> Result<f64> {
        Ok(self.evaluate_detailed()?.value)
    }

    pub fn evaluate_detailed(&self) -> Result<EntropyValue> {
        let l = self.params.lambda;
        let a = self.params.alpha.unwrap_or(1.0);
        let b = self.params.beta.unwrap_or(1.0);
        let cfg = &self.cfg;
        match self.kind {
            EntropyKind::Shannon => shannon_detailed(l, cfg),
            EntropyKind::Renyi => psi_based(a, l, cfg, |lp| lp / (1.0 - a)),
            EntropyKind::GenRenyi1 => gen_renyi1_detailed(a, l, cfg),
            EntropyKind::GenRenyi2 => gen_renyi2_detailed(a, b, l, cfg),
            EntropyKind::Tsallis => psi_based(a, l, cfg, |lp| lp.exp_m1() / (1.0 - a)),
            EntropyKind::SharmaMittal => {
                let exponent = (1.0 - b) / (1.0 - a);
                psi_based(a, l, cfg, |lp| (exponent * lp).exp_m1() / (1.0 - b))
            }
        }
    }
}

fn check_not_one(name: &str, v: f64) -> Result<()> {
    if (v - 1.0).abs() <= ORDER_EPS {
        return Err(EntropyError::DegenerateOrder(format!(
            "{name} must differ from 1 (|{name} - 1| > {ORDER_EPS:e}), got {v}"
        )));
    }
    Ok(())
}

fn check_distinct(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() <= ORDER_EPS {
        return Err(EntropyError::DegenerateOrder(format!(
            "alpha and beta must differ (|alpha - beta| > {ORDER_EPS:e}), got {a} and {b}"
        )));
    }
    Ok(())
}

fn psi_based(
    alpha: f64,
    lambda: f64,
    cfg: &SeriesConfig,
    f: impl Fn(f64) -> f64,
) -> Result<EntropyValue> {
    let r = psi(alpha, lambda, cfg)?;
    Ok(EntropyValue {
        value: f(r.log_value),
        terms_used: r.terms_used,
        rel_tail: r.tail_bound / r.value.max(f64::MIN_POSITIVE),
    })
}

fn shannon_detailed(lambda: f64, cfg: &SeriesConfig) -> Result<EntropyValue> {
    // −Σ p_i ln p_i = −c − Σ p_i (ln p_i − c) with c = ln p_mode. The
    // centred logs stay O(1) near the mode, so nothing cancels at large λ.
    let m = psi_moments(1.0, lambda, cfg)?;
    Ok(EntropyValue {
        value: -m.dlog_dalpha,
        terms_used: m.terms_used,
        rel_tail: m.rel_tail,
    })
}

fn gen_renyi1_detailed(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<EntropyValue> {
    check_order("alpha", alpha)?;
    if (alpha - 1.0).abs() <= ORDER_EPS {
        return shannon_detailed(lambda, cfg);
    }
    let m = psi_moments(alpha, lambda, cfg)?;
    Ok(EntropyValue {
        value: -m.dlog_dalpha,
        terms_used: m.terms_used,
        rel_tail: m.rel_tail,
    })
}

fn gen_renyi2_detailed(
    alpha: f64,
    beta: f64,
    lambda: f64,
    cfg: &SeriesConfig,
) -> Result<EntropyValue> {
    check_order("alpha", alpha)?;
    check_order("beta", beta)?;
    check_distinct(alpha, beta)?;
    // Ordered so that swapping the orders reproduces the same bits.
    let (lo, hi) = if alpha < beta {
        (alpha, beta)
    } else {
        (beta, alpha)
    };
    let p_lo = psi(lo, lambda, cfg)?;
    let p_hi = psi(hi, lambda, cfg)?;
    Ok(EntropyValue {
        value: (p_lo.log_value - p_hi.log_value) / (hi - lo),
        terms_used: p_lo.terms_used + p_hi.terms_used,
        rel_tail: (p_lo.tail_bound / p_lo.value.max(f64::MIN_POSITIVE))
            .max(p_hi.tail_bound / p_hi.value.max(f64::MIN_POSITIVE)),
    })
}

/// Shannon entropy H_SH(λ) = −Σ p_i(λ) ln p_i(λ).
pub fn shannon(lambda: f64, cfg: &SeriesConfig) -> Result<f64> {
    Ok(shannon_detailed(lambda, cfg)?.value)
}

/// Rényi entropy ln ψ(α, λ) / (1 − α), α ≠ 1.
pub fn renyi(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_not_one("alpha", alpha)?;
    Ok(psi_based(alpha, lambda, cfg, |lp| lp / (1.0 - alpha))?.value)
}

/// One-order generalized Rényi entropy −∂_α ln ψ(α, λ).
///
/// Continuous through α = 1, where it equals the Shannon entropy; orders
/// within [`ORDER_EPS`] of 1 are delegated to [`shannon`].
pub fn gen_renyi1(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<f64> {
    Ok(gen_renyi1_detailed(alpha, lambda, cfg)?.value)
}

/// Two-order generalized Rényi entropy ln(ψ(α, λ)/ψ(β, λ)) / (β − α).
/// Symmetric in (α, β).
pub fn gen_renyi2(alpha: f64, beta: f64, lambda: f64, cfg: &SeriesConfig) -> Result<f64> {
    Ok(gen_renyi2_detailed(alpha, beta, lambda, cfg)?.value)
}

/// Tsallis entropy (ψ(α, λ) − 1)/(1 − α), evaluated as expm1(ln ψ)/(1 − α).
pub fn tsallis(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_not_one("alpha", alpha)?;
    Ok(psi_based(alpha, lambda, cfg, |lp| lp.exp_m1() / (1.0 - alpha))?.value)
}

/// Sharma–Mittal entropy (ψ(α, λ)^{(1−β)/(1−α)} − 1)/(1 − β).
///
/// The exponent is applied to ln ψ before exponentiating.
pub fn sharma_mittal(alpha: f64, beta: f64, lambda: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_order("beta", beta)?;
    check_not_one("alpha", alpha)?;
    check_not_one("beta", beta)?;
    let exponent = (1.0 - beta) / (1.0 - alpha);
    Ok(psi_based(alpha, lambda, cfg, |lp| {
        (exponent * lp).exp_m1() / (1.0 - beta)
    })?
    .value)
}
