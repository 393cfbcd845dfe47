//! Mode-centred evaluation of Poisson power sums.
//!
//! The central object is ψ(α, λ) = Σ_i p_i(λ)^α. Terms are summed outward
//! from the integer mode m = ⌊λ⌋, where p_i peaks, after dividing every term
//! by the mode term. All shifted terms are then at most one, so the same loop
//! serves both small and huge α·λ without overflow or underflow of the
//! accumulated sums; the shift is added back in log space.
//!
//! A direction stops once the envelope of the current term has stayed below
//! `rel_tol` times the running sum for three consecutive terms and the
//! geometric tail `e·r/(1−r)` (r the latest successive-term ratio) is below
//! half of `rel_tol` times the running sum. Beyond the mode the successive
//! ratios (λ/(i+1))^α are decreasing, so the geometric estimate bounds the
//! true tail.

use crate::error::{domain, EntropyError, Result};
use crate::special::ln_factorial;

/// Smallest intensity accepted anywhere in the crate.
pub const MIN_LAMBDA: f64 = 1e-300;

/// Truncation and stability policy shared by every infinite sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    rel_tol: f64,
    max_terms: usize,
    log_domain_threshold: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 10_000_000,
            log_domain_threshold: 30.0,
        }
    }
}

impl SeriesConfig {
    pub fn new(rel_tol: f64, max_terms: usize, log_domain_threshold: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-6) {
            return domain(format!("rel_tol must lie in (0, 1e-6), got {rel_tol}"));
        }
        if max_terms < 1000 {
            return domain(format!("max_terms must be at least 1000, got {max_terms}"));
        }
        if !(log_domain_threshold > 0.0) || !log_domain_threshold.is_finite() {
            return domain(format!(
                "log_domain_threshold must be positive, got {log_domain_threshold}"
            ));
        }
        Ok(Self {
            rel_tol,
            max_terms,
            log_domain_threshold,
        })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn log_domain_threshold(&self) -> f64 {
        self.log_domain_threshold
    }
}

/// Intensity and orders of a Poisson entropy evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonParams {
    pub lambda: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl PoissonParams {
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            alpha: None,
            beta: None,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    /// Checks λ and every order that is present.
    pub fn validate(&self) -> Result<()> {
        check_lambda(self.lambda)?;
        if let Some(a) = self.alpha {
            check_order("alpha", a)?;
        }
        if let Some(b) = self.beta {
            check_order("beta", b)?;
        }
        Ok(())
    }
}

/// A series value together with truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// ln |value|, computed without going through `value` where the
    /// operation supports it (so it stays finite when `value` under/overflows).
    pub log_value: f64,
    pub terms_used: usize,
    /// Upper estimate of the absolute truncation error of `value`.
    pub tail_bound: f64,
    pub used_log_domain: bool,
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= MIN_LAMBDA {
        return domain(format!(
            "lambda must be finite and > {MIN_LAMBDA:e}, got {lambda}"
        ));
    }
    Ok(())
}

pub(crate) fn check_order(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return domain(format!("{name} must be finite and positive, got {value}"));
    }
    Ok(())
}

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Weighted sums Σ e^{a_i − shift} and Σ e^{a_i − shift} w_i[k].
#[derive(Debug, Clone, Copy)]
pub(crate) struct ModeSums<const K: usize> {
    pub shift: f64,
    pub s0: f64,
    pub s: [f64; K],
    pub terms: usize,
    /// Tail estimate of the envelope Σ e^{a_i − shift}(1 + max_k |w_i[k]|)
    /// beyond the stopping points, in the same units as `s0`.
    pub tail: f64,
}

impl<const K: usize> ModeSums<K> {
    pub fn rel_tail(&self) -> f64 {
        self.tail / self.s0
    }

    pub fn log_total(&self) -> f64 {
        self.shift + self.s0.ln()
    }

    pub fn mean(&self, k: usize) -> f64 {
        self.s[k] / self.s0
    }
}

struct Accumulator<const K: usize> {
    s0: Kahan,
    s: [Kahan; K],
}

impl<const K: usize> Accumulator<K> {
    fn add(&mut self, t: f64, w: &[f64; K]) -> f64 {
        self.s0.add(t);
        let mut wmax = 0.0f64;
        for (acc, &wk) in self.s.iter_mut().zip(w) {
            acc.add(t * wk);
            wmax = wmax.max(wk.abs());
        }
        t * (1.0 + wmax)
    }
}

struct StopRule {
    tol: f64,
    small_run: u32,
}

impl StopRule {
    /// Returns the tail estimate once the direction may stop.
    fn check(
        &mut self,
        env: f64,
        prev_env: f64,
        partial: f64,
        remaining: Option<u64>,
    ) -> Option<f64> {
        if env < self.tol * partial {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        if self.small_run < 3 {
            return None;
        }
        let ratio = if prev_env > 0.0 { env / prev_env } else { 0.0 };
        let mut est = if env == 0.0 {
            0.0
        } else if ratio < 1.0 {
            env * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if let Some(n) = remaining {
            est = est.min(env * n as f64);
        }
        (est < 0.5 * self.tol * partial).then_some(est)
    }
}

/// Sums `term(i)` over i ≥ 0, outward from `mode`.
///
/// `term(i)` returns the log-magnitude a_i and the weights w_i; all sums are
/// taken relative to e^{a_mode}. `mode` should be (close to) the argmax of a_i.
pub(crate) fn sum_mode_centered<const K: usize, F>(
    mode: u64,
    cfg: &SeriesConfig,
    mut term: F,
) -> Result<ModeSums<K>>
where
    F: FnMut(u64) -> (f64, [f64; K]),
{
    let (shift, w_mode) = term(mode);
    if !shift.is_finite() {
        return domain(format!("series term at the mode is not finite ({shift})"));
    }
    let mut acc = Accumulator::<K> {
        s0: Kahan::default(),
        s: [Kahan::default(); K],
    };
    let env_mode = acc.add(1.0, &w_mode);
    let mut terms = 1usize;
    let max_terms = cfg.max_terms;

    let mut tail_down = 0.0;
    let mut rule = StopRule {
        tol: cfg.rel_tol,
        small_run: 0,
    };
    let mut prev = env_mode;
    let mut i = mode;
    while i > 0 {
        i -= 1;
        let (a, w) = term(i);
        let env = acc.add((a - shift).exp(), &w);
        terms += 1;
        if let Some(est) = rule.check(env, prev, acc.s0.value(), Some(i)) {
            tail_down = est;
            break;
        }
        if terms >= max_terms {
            return Err(EntropyError::TruncationFailure {
                terms,
                tail: env / acc.s0.value(),
            });
        }
        prev = env;
    }

    let mut rule = StopRule {
        tol: cfg.rel_tol,
        small_run: 0,
    };
    let mut prev = env_mode;
    let mut i = mode;
    let tail_up = loop {
        i += 1;
        let (a, w) = term(i);
        let env = acc.add((a - shift).exp(), &w);
        terms += 1;
        if let Some(est) = rule.check(env, prev, acc.s0.value(), None) {
            break est;
        }
        if terms >= max_terms {
            return Err(EntropyError::TruncationFailure {
                terms,
                tail: env / acc.s0.value(),
            });
        }
        prev = env;
    };

    let s: [f64; K] = std::array::from_fn(|k| acc.s[k].value());
    Ok(ModeSums {
        shift,
        s0: acc.s0.value(),
        s,
        terms,
        tail: tail_down + tail_up,
    })
}

/// Integer mode ⌊λ⌋ of the Poisson distribution.
pub(crate) fn poisson_mode(lambda: f64) -> u64 {
    lambda.floor() as u64
}

fn log_pmf_unchecked(i: u64, ln_lambda: f64, lambda: f64) -> f64 {
    if i == 0 {
        -lambda
    } else {
        i as f64 * ln_lambda - lambda - ln_factorial(i)
    }
}

/// ln p_i(λ) = i ln λ − λ − ln i!.
pub fn poisson_log_pmf(i: u64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(log_pmf_unchecked(i, lambda.ln(), lambda))
}

/// ψ(α, λ) with diagnostics. When αλ exceeds the configured threshold the
/// result is flagged as log-domain and `value` may underflow; `log_value`
/// stays finite.
pub fn psi(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    check_order("alpha", alpha)?;
    check_lambda(lambda)?;
    let ln_l = lambda.ln();
    let sums = sum_mode_centered::<0, _>(poisson_mode(lambda), cfg, |i| {
        (alpha * log_pmf_unchecked(i, ln_l, lambda), [])
    })?;
    let log_value = sums.log_total();
    let value = log_value.exp();
    Ok(EvalResult {
        value,
        log_value,
        terms_used: sums.terms,
        tail_bound: sums.rel_tail() * value,
        used_log_domain: alpha * lambda > cfg.log_domain_threshold,
    })
}

/// ln ψ(α, λ), accumulated in log space.
pub fn log_psi(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<f64> {
    Ok(psi(alpha, lambda, cfg)?.log_value)
}

/// ln ψ and its first and mixed partial derivatives, from one shared loop
/// over the term-by-term differentiated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiMoments {
    pub alpha: f64,
    pub lambda: f64,
    pub log_psi: f64,
    /// ∂/∂α ln ψ = Σ p_i^α ln p_i / Σ p_i^α.
    pub dlog_dalpha: f64,
    /// ∂/∂λ ln ψ = α Σ p_i^α (i/λ − 1) / Σ p_i^α.
    pub dlog_dlambda: f64,
    /// ∂²/∂α∂λ ln ψ.
    pub d2_mixed: f64,
    pub terms_used: usize,
    /// Relative truncation estimate of the weighted sums.
    pub rel_tail: f64,
    pub used_log_domain: bool,
}

impl PsiMoments {
    pub fn psi(&self) -> f64 {
        self.log_psi.exp()
    }
}

/// Shared loop behind the derivative operations.
///
/// With t_i = p_i^α, c = ln p_m (mode), u_i = i/λ − 1:
///
/// ```text
/// ψ     = e^{αc} Σ t̃_i
/// ψ_α   = Σ t_i ln p_i              = e^{αc} (c S0 + S1)
/// ψ_λ   = α Σ t_i u_i               = e^{αc} α S2
/// ψ_αλ  = Σ t_i u_i (1 + α ln p_i)  = e^{αc} (S2 + α c S2 + α S3)
/// ```
///
/// where t̃_i = t_i e^{−αc}, S0 = Σ t̃, S1 = Σ t̃ (ln p − c), S2 = Σ t̃ u,
/// S3 = Σ t̃ u (ln p − c). Centring ln p at its maximum keeps the covariance
/// in the mixed derivative free of cancellation.
pub fn psi_moments(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<PsiMoments> {
    check_order("alpha", alpha)?;
    check_lambda(lambda)?;
    let ln_l = lambda.ln();
    let mode = poisson_mode(lambda);
    let c = log_pmf_unchecked(mode, ln_l, lambda);
    let sums = sum_mode_centered::<3, _>(mode, cfg, |i| {
        let lp = log_pmf_unchecked(i, ln_l, lambda);
        let centred = lp - c;
        let u = (i as f64 - lambda) / lambda;
        (alpha * lp, [centred, u, u * centred])
    })?;

    let psi_log = sums.log_total();
    // Quotients of the differentiated series by ψ; the e^{αc} factors cancel.
    let psi_a = c + sums.mean(0);
    let psi_l = alpha * sums.mean(1);
    // Quotient rule ψ_αλ/ψ − (ψ_α/ψ)(ψ_λ/ψ); the α c S2 terms cancel exactly.
    let d2_mixed = sums.mean(1) + alpha * (sums.mean(2) - sums.mean(0) * sums.mean(1));

    Ok(PsiMoments {
        alpha,
        lambda,
        log_psi: psi_log,
        dlog_dalpha: psi_a,
        dlog_dlambda: psi_l,
        d2_mixed,
        terms_used: sums.terms,
        rel_tail: sums.rel_tail(),
        used_log_domain: alpha * lambda > cfg.log_domain_threshold,
    })
}

fn derivative_result(log_psi: f64, ratio: f64, m: &PsiMoments, weight: f64) -> EvalResult {
    let value = log_psi.exp() * ratio;
    EvalResult {
        value,
        log_value: log_psi + ratio.abs().ln(),
        terms_used: m.terms_used,
        tail_bound: m.rel_tail * weight * log_psi.exp(),
        used_log_domain: m.used_log_domain,
    }
}

/// ∂ψ/∂α = Σ p_i^α ln p_i. Negative for every non-degenerate Poisson law.
pub fn dpsi_dalpha(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    let m = psi_moments(alpha, lambda, cfg)?;
    let c = poisson_log_pmf(poisson_mode(lambda), lambda)?;
    Ok(derivative_result(
        m.log_psi,
        m.dlog_dalpha,
        &m,
        1.0 + c.abs(),
    ))
}

/// ∂ψ/∂λ = α e^{−αλ} Σ (i − λ) λ^{αi−1} / (i!)^α.
pub fn dpsi_dlambda(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    let m = psi_moments(alpha, lambda, cfg)?;
    Ok(derivative_result(m.log_psi, m.dlog_dlambda, &m, alpha))
}

/// ∂²/∂α∂λ ln ψ(α, λ).
pub fn d2_logpsi_dalpha_dlambda(alpha: f64, lambda: f64, cfg: &SeriesConfig) -> Result<f64> {
    Ok(psi_moments(alpha, lambda, cfg)?.d2_mixed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn config_invariants() {
        assert!(SeriesConfig::new(1e-14, 10_000, 30.0).is_ok());
        assert!(SeriesConfig::new(1e-6, 10_000, 30.0).is_err());
        assert!(SeriesConfig::new(0.0, 10_000, 30.0).is_err());
        assert!(SeriesConfig::new(1e-12, 999, 30.0).is_err());
        assert!(SeriesConfig::new(1e-12, 1000, -1.0).is_err());
    }

    #[test]
    fn log_pmf_trivial_values() {
        assert!((poisson_log_pmf(0, 1.0).unwrap() + 1.0).abs() < 1e-15);
        assert!((poisson_log_pmf(1, 1.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(poisson_log_pmf(3, 0.0).is_err());
        assert!(poisson_log_pmf(3, -2.0).is_err());
        assert!(poisson_log_pmf(3, 1e-301).is_err());
        let big = poisson_log_pmf(1_000_000_000, 1e8).unwrap();
        assert!(big.is_finite());
    }

    #[test]
    fn psi_normalisation_on_grid() {
        for &l in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 7.3] {
            let r = psi(1.0, l, &cfg()).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12, "lambda = {l}: {}", r.value);
            assert!(r.tail_bound <= cfg().rel_tol() * r.value);
        }
    }

    #[test]
    fn psi_near_zero_intensity() {
        let r = psi(2.0, 1e-12, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        assert!(psi(2.0, 1e-300, &cfg()).is_err());
        assert!(psi(0.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn log_domain_flag_and_finite_log() {
        let r = psi(2.0, 100.0, &cfg()).unwrap();
        assert!(r.used_log_domain);
        assert!(r.log_value.is_finite());
        let r = psi(40.0, 5000.0, &cfg()).unwrap();
        assert!(r.used_log_domain);
        assert!(r.log_value.is_finite() && r.log_value < -100.0);
        let r = psi(0.5, 2.0, &cfg()).unwrap();
        assert!(!r.used_log_domain);
    }

    #[test]
    fn log_psi_of_unit_order_is_zero() {
        assert!(log_psi(1.0, 5.0, &cfg()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn dpsi_dlambda_vanishes_at_unit_order() {
        let r = dpsi_dlambda(1.0, 4.0, &cfg()).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn derivative_signs() {
        for &a in &[0.1, 0.5, 0.9, 1.1, 2.0, 5.0] {
            for &l in &[0.3, 1.0, 2.5, 10.0, 60.0] {
                assert!(dpsi_dalpha(a, l, &cfg()).unwrap().value < 0.0);
                let d = dpsi_dlambda(a, l, &cfg()).unwrap().value;
                if a < 1.0 {
                    assert!(d > 0.0, "alpha = {a}, lambda = {l}");
                } else {
                    assert!(d < 0.0, "alpha = {a}, lambda = {l}");
                }
            }
        }
    }

    #[test]
    fn one_sided_psi_bounds() {
        use std::f64::consts::PI;
        for &l in &[1.0f64, 1.5, 2.0, 3.7, 10.0, 42.0, 100.0] {
            let floor = (2.0 * PI * l.floor()).ln();
            for &a in &[0.2, 0.5, 0.8] {
                let lp = log_psi(a, l, &cfg()).unwrap();
                assert!(lp >= 0.5 * (1.0 - a) * floor, "alpha = {a}, lambda = {l}");
            }
            for &a in &[1.5, 2.0, 5.0] {
                let lp = log_psi(a, l, &cfg()).unwrap();
                assert!(lp <= -0.5 * (a - 1.0) * floor, "alpha = {a}, lambda = {l}");
            }
        }
    }

    #[test]
    fn kahan_recovers_small_addends() {
        let mut k = Kahan::default();
        k.add(1.0);
        for _ in 0..1000 {
            k.add(1e-17);
        }
        assert!((k.value() - (1.0 + 1e-14)).abs() < 1e-16);
    }

    #[test]
    fn truncation_failure_is_reported() {
        let tight = SeriesConfig::new(1e-14, 1000, 30.0).unwrap();
        match psi(0.001, 1.0, &tight) {
            Err(EntropyError::TruncationFailure { terms, .. }) => assert!(terms >= 1000),
            other => panic!("expected truncation failure, got {other:?}"),
        }
    }
}
