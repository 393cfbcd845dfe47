//! Leading-order large-λ approximants.
//!
//! All forms are total closed expressions for λ > 0; whether they are useful
//! at a given λ is for the caller to judge. The one-parameter generalized
//! Rényi entropy has no closed-form asymptote and yields
//! [`EntropyError::NoAsymptote`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::entropies::{EntropyKind, ORDER_EPS};
use crate::error::{EntropyError, Result};
use crate::series::{check_lambda, check_order};

/// What to approximate: one of the entropies, or ψ itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoteKind {
    Entropy(EntropyKind),
    Psi,
}

fn half_log_2pi_lambda(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(0.5 * (2.0 * PI * lambda).ln())
}

fn check_not_one(name: &str, v: f64) -> Result<()> {
    check_order(name, v)?;
    if (v - 1.0).abs() <= ORDER_EPS {
        return Err(EntropyError::DegenerateOrder(format!(
            "{name} must differ from 1, got {v}"
        )));
    }
    Ok(())
}

/// ln ψ ≈ ½(1 − α) ln(2πλ) − ½ ln α.
pub fn log_psi_asymptote(alpha: f64, lambda: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    Ok((1.0 - alpha) * half_log_2pi_lambda(lambda)? - 0.5 * alpha.ln())
}

/// ψ(α, λ) ≈ (2πλ)^{(1−α)/2} / √α.
pub fn psi_asymptote(alpha: f64, lambda: f64) -> Result<f64> {
    Ok(log_psi_asymptote(alpha, lambda)?.exp())
}

/// ½ ln(2πλ) + ½.
pub fn shannon_asymptote(lambda: f64) -> Result<f64> {
    Ok(half_log_2pi_lambda(lambda)? + 0.5)
}

/// ln α / (2(α − 1)), the additive constant of the Rényi asymptote.
pub fn renyi_constant(alpha: f64) -> Result<f64> {
    check_not_one("alpha", alpha)?;
    let c = alpha.ln() / (2.0 * (alpha - 1.0));
    assert!(
        c > 0.0,
        "Rényi asymptote constant {c} not positive at alpha = {alpha}"
    );
    Ok(c)
}

/// ½ ln(2πλ) + ln α / (2(α − 1)).
pub fn renyi_asymptote(alpha: f64, lambda: f64) -> Result<f64> {
    Ok(half_log_2pi_lambda(lambda)? + renyi_constant(alpha)?)
}

/// ½ ln(2πλ) + (ln β − ln α) / (2(β − α)), symmetric in (α, β).
pub fn gen_renyi2_asymptote(alpha: f64, beta: f64, lambda: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_order("beta", beta)?;
    if (alpha - beta).abs() <= ORDER_EPS {
        return Err(EntropyError::DegenerateOrder(format!(
            "alpha and beta must differ, got {alpha} and {beta}"
        )));
    }
    let (lo, hi) = if alpha < beta {
        (alpha, beta)
    } else {
        (beta, alpha)
    };
    let c = (hi.ln() - lo.ln()) / (2.0 * (hi - lo));
    assert!(c > 0.0);
    Ok(half_log_2pi_lambda(lambda)? + c)
}

/// α < 1: (2πλ)^{(1−α)/2} / (√α (1 − α)); α > 1: the limit 1/(α − 1).
pub fn tsallis_asymptote(alpha: f64, lambda: f64) -> Result<f64> {
    check_not_one("alpha", alpha)?;
    check_lambda(lambda)?;
    if alpha < 1.0 {
        Ok(psi_asymptote(alpha, lambda)? / (1.0 - alpha))
    } else {
        Ok(1.0 / (alpha - 1.0))
    }
}

/// β < 1: (2πλ)^{(1−β)/2} / ((1 − β) α^{(1−β)/(2(1−α))}); β > 1: 1/(β − 1).
pub fn sharma_mittal_asymptote(alpha: f64, beta: f64, lambda: f64) -> Result<f64> {
    check_not_one("alpha", alpha)?;
    check_not_one("beta", beta)?;
    check_lambda(lambda)?;
    if beta < 1.0 {
        let e = (1.0 - beta) / (1.0 - alpha);
        let ln_v = (1.0 - beta) * half_log_2pi_lambda(lambda)? - 0.5 * e * alpha.ln();
        Ok(ln_v.exp() / (1.0 - beta))
    } else {
        Ok(1.0 / (beta - 1.0))
    }
}

/// Dispatch over [`AsymptoteKind`]. Missing orders are domain errors.
pub fn asymptote(
    kind: AsymptoteKind,
    alpha: Option<f64>,
    beta: Option<f64>,
    lambda: f64,
) -> Result<f64> {
    let need = |o: Option<f64>, name: &str| {
        o.ok_or_else(|| EntropyError::Domain(format!("asymptote requires {name}")))
    };
    match kind {
        AsymptoteKind::Psi => psi_asymptote(need(alpha, "alpha")?, lambda),
        AsymptoteKind::Entropy(k) => match k {
            EntropyKind::Shannon => shannon_asymptote(lambda),
            EntropyKind::Renyi => renyi_asymptote(need(alpha, "alpha")?, lambda),
            EntropyKind::GenRenyi1 => Err(EntropyError::NoAsymptote("gen_renyi1")),
            EntropyKind::GenRenyi2 => {
                gen_renyi2_asymptote(need(alpha, "alpha")?, need(beta, "beta")?, lambda)
            }
            EntropyKind::Tsallis => tsallis_asymptote(need(alpha, "alpha")?, lambda),
            EntropyKind::SharmaMittal => {
                sharma_mittal_asymptote(need(alpha, "alpha")?, need(beta, "beta")?, lambda)
            }
        },
    }
}
