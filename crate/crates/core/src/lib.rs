//! Entropies of the Poisson distribution.
//!
//! Every entropy handled here (Shannon, Rényi, the one- and two-parameter
//! generalized Rényi entropies, Tsallis and Sharma–Mittal) is a function of
//! the power sum
//!
//! ```text
//! ψ(α, λ) = Σ_{i≥0} p_i(λ)^α,   p_i(λ) = λ^i e^{−λ} / i!
//! ```
//!
//! and of its partial derivatives. The crate evaluates these series stably
//! (mode-centred, shifted log-domain accumulation), provides the two-sided
//! bounds and large-λ asymptotes of each entropy, and scans entropies in λ to
//! detect where they fail to be monotone.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`series`] | Poisson log-pmf, ψ, log ψ and its first/mixed derivatives |
//! | [`entropies`] | the six entropies and a uniform [`EntropyQuery`] front end |
//! | [`mittag_leffler`] | one-parameter Mittag–Leffler function E_α(x), x ≥ 0 |
//! | [`bounds`] | maximal probability μ(λ), lower/upper entropy bounds |
//! | [`asymptotics`] | leading-order large-λ approximants |
//! | [`analysis`] | ρ(α), λ-derivatives, monotonicity scans |
//! | [`cli`] | command-line front end emitting CSV/JSON |
//!
//! ```
//! use poisson_entropy::{entropies, SeriesConfig};
//!
//! let cfg = SeriesConfig::default();
//! let h = entropies::shannon(10.0, &cfg).unwrap();
//! assert!((h - 2.561_409_935_274_9).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN lands in the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod asymptotics;
pub mod bounds;
pub mod cli;
pub mod entropies;
mod error;
pub mod format;
pub mod mittag_leffler;
pub mod series;
pub mod special;

pub use entropies::{EntropyKind, EntropyQuery};
pub use error::{EntropyError, Result};
pub use series::{EvalResult, PoissonParams, SeriesConfig};
