//! Point-null versus Beta-smeared alternative for a binomial outcome.
//!
//! `H₀: θ = 1/2` against `H₁: θ ~ Beta(a, b)`. The marginal likelihood under
//! `H₁` has the closed form `C(n, s) · B(s + a, n − s + b) / B(a, b)`; the
//! posterior of `H₀` is computed as a logistic function of the log Bayes
//! factor so nothing underflows at tiny α or large `n`.

use serde::{Deserialize, Serialize};

use crate::binomial::{
    log_pmf, select_barely_significant, BinomialModel, BinomialOutcome, CriticalCount,
    SelectionMode, TailConvention,
};
use crate::error::{open_unit, Error, Result};
use crate::special::{ln_beta, ln_binomial, ln_gamma_ratio};

/// Shape parameters of a Beta prior on θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPrior {
    a: f64,
    b: f64,
}

impl BetaPrior {
    /// Beta(1, 1), the uniform prior.
    pub const UNIFORM: BetaPrior = BetaPrior { a: 1.0, b: 1.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid("prior a", a, "must be positive and finite"));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::invalid("prior b", b, "must be positive and finite"));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

impl Default for BetaPrior {
    fn default() -> Self {
        BetaPrior::UNIFORM
    }
}

/// Likelihoods, Bayes factor and posterior for one outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvidenceReport {
    /// `ln P(D | H₀)`.
    pub log_l0: f64,
    /// `ln P(D | H₁)`, the log marginal likelihood.
    pub log_l1: f64,
    pub log_bf01: f64,
    pub bf01: f64,
    pub prior_prob_h0: f64,
    pub posterior_h0: f64,
    /// Posterior odds in favour of `H₁`; `1 / bf01` under equal prior odds.
    pub posterior_odds_h1: f64,
}

/// `ln ∫ C(n,s) θ^s (1−θ)^(n−s) Beta(θ; a, b) dθ`.
pub fn log_marginal_h1(outcome: BinomialOutcome, prior: BetaPrior) -> f64 {
    let n = outcome.n() as f64;
    let s = outcome.s() as f64;
    let f = n - s;
    let (a, b) = (prior.a, prior.b);
    if a.fract() == 0.0 && b.fract() == 0.0 && a + b <= 33.0 {
        // C(n,s) B(s+a, f+b) / B(a,b) regrouped into gamma ratios with integer
        // shifts; under Beta(1,1) this is exactly -ln(n + 1).
        ln_gamma_ratio(s + 1.0, a - 1.0) + ln_gamma_ratio(f + 1.0, b - 1.0)
            - ln_gamma_ratio(n + 1.0, a + b - 1.0)
            - ln_beta(a, b)
    } else {
        ln_binomial(outcome.n(), outcome.s()) + ln_beta(s + a, f + b) - ln_beta(a, b)
    }
}

/// Posterior probability of `H₀` with prior probability `prior_prob_h0`.
pub fn posterior_h0(
    outcome: BinomialOutcome,
    prior: BetaPrior,
    prior_prob_h0: f64,
) -> Result<EvidenceReport> {
    open_unit("pi0", prior_prob_h0)?;
    let log_l0 = log_pmf(outcome, BinomialModel::NULL);
    let log_l1 = log_marginal_h1(outcome, prior);
    let log_bf01 = log_l0 - log_l1;
    // ln of posterior odds for H₁; with π₀ = 1/2 the prior term is exactly 0.
    let log_odds_h1 = -log_bf01 + ((1.0 - prior_prob_h0).ln() - prior_prob_h0.ln());
    Ok(EvidenceReport {
        log_l0,
        log_l1,
        log_bf01,
        bf01: log_bf01.exp(),
        prior_prob_h0,
        posterior_h0: logistic_complement(log_odds_h1),
        posterior_odds_h1: log_odds_h1.exp(),
    })
}

/// `1 / (1 + e^x)`, stable for either sign of `x`.
fn logistic_complement(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Evidence carried by a result that is "just significant" at `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEvidence {
    pub n: u64,
    pub alpha: f64,
    pub critical: CriticalCount,
    pub report: EvidenceReport,
}

/// One point of the posterior-versus-N curve: selects the barely
/// significant `s` for `(n, alpha)` and evaluates the posterior at equal
/// prior odds.
pub fn evidence_at_threshold(
    n: u64,
    alpha: f64,
    mode: SelectionMode,
    tail: TailConvention,
    prior: BetaPrior,
) -> Result<ThresholdEvidence> {
    let critical = select_barely_significant(n, alpha, mode, tail)?;
    let outcome = BinomialOutcome::new(n, critical.s)?;
    let report = posterior_h0(outcome, prior, 0.5)?;
    Ok(ThresholdEvidence {
        n,
        alpha,
        critical,
        report,
    })
}
