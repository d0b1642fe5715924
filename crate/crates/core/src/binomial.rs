//! Exact binomial probabilities and sign-test p-values.
//!
//! All tail probabilities are accumulated in log space starting from the
//! most extreme outcome (`s = n`) and moving inward, so the smallest terms are
//! added first. [`p_value`] and [`select_barely_significant`] share the same
//! accumulator, which makes a selected `(s, p)` pair re-derivable bit for bit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{open_unit, Error, Result};
use crate::special::{ln_add_exp, ln_binomial};

/// `N` trials with `s` successes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinomialOutcome {
    n: u64,
    s: u64,
}

impl BinomialOutcome {
    pub fn new(n: u64, s: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", n, "trial count must be at least 1"));
        }
        if s > n {
            return Err(Error::invalid("s", s, "success count cannot exceed n"));
        }
        Ok(Self { n, s })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn s(&self) -> u64 {
        self.s
    }
}

/// Success probability θ of a binomial model.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct BinomialModel {
    theta: f64,
}

impl BinomialModel {
    /// The point null θ = 1/2.
    pub const NULL: BinomialModel = BinomialModel { theta: 0.5 };

    pub fn new(theta: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&theta) {
            Ok(Self { theta })
        } else {
            Err(Error::invalid("theta", theta, "must lie in [0, 1]"))
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum TailConvention {
    /// `P(X ≥ max(s, n−s)) + P(X ≤ min(s, n−s))`, capped at 1.
    #[default]
    #[serde(rename = "two")]
    TwoSidedSymmetric,
    /// `P(X ≥ s)`.
    #[serde(rename = "one")]
    OneSidedUpper,
}

impl fmt::Display for TailConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailConvention::TwoSidedSymmetric => "two",
            TailConvention::OneSidedUpper => "one",
        })
    }
}

impl FromStr for TailConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" => Ok(TailConvention::TwoSidedSymmetric),
            "one" => Ok(TailConvention::OneSidedUpper),
            other => Err(Error::invalid("tail", other, "expected `two` or `one`")),
        }
    }
}

/// How the "barely significant" success count is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SelectionMode {
    /// Success count whose p-value is closest to α; ties go to the larger count.
    #[default]
    #[serde(rename = "nearest")]
    NearestToAlpha,
    /// Smallest success count whose p-value does not exceed α.
    #[serde(rename = "strict")]
    StrictAtMostAlpha,
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMode::NearestToAlpha => "nearest",
            SelectionMode::StrictAtMostAlpha => "strict",
        })
    }
}

impl FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nearest" => Ok(SelectionMode::NearestToAlpha),
            "strict" => Ok(SelectionMode::StrictAtMostAlpha),
            other => Err(Error::invalid(
                "mode",
                other,
                "expected `nearest` or `strict`",
            )),
        }
    }
}

/// `ln P(X = s)` for `X ~ Binomial(n, θ)`.
pub fn log_pmf(outcome: BinomialOutcome, model: BinomialModel) -> f64 {
    let BinomialOutcome { n, s } = outcome;
    let theta = model.theta;
    let failures = n - s;
    let success_term = if s == 0 { 0.0 } else { s as f64 * theta.ln() };
    let failure_term = if failures == 0 {
        0.0
    } else {
        failures as f64 * (1.0 - theta).ln()
    };
    ln_binomial(n, s) + (success_term + failure_term)
}

fn log_pmf_null(n: u64, s: u64) -> f64 {
    log_pmf(BinomialOutcome { n, s }, BinomialModel::NULL)
}

/// Walks `s = n, n-1, …` yielding `(s, ln P(X ≥ s))` under θ = 1/2.
struct UpperTail {
    n: u64,
    next: Option<u64>,
    log_tail: f64,
}

impl UpperTail {
    fn new(n: u64) -> Self {
        Self {
            n,
            next: Some(n),
            log_tail: f64::NEG_INFINITY,
        }
    }

    /// Accumulates down to `s` and returns `ln P(X ≥ s)`.
    fn at(n: u64, s: u64) -> f64 {
        UpperTail::new(n)
            .find(|&(k, _)| k == s)
            .map(|(_, log_tail)| log_tail)
            .expect("s <= n")
    }
}

impl Iterator for UpperTail {
    type Item = (u64, f64);

    fn next(&mut self) -> Option<(u64, f64)> {
        let k = self.next?;
        self.log_tail = ln_add_exp(self.log_tail, log_pmf_null(self.n, k));
        self.next = k.checked_sub(1);
        Some((k, self.log_tail))
    }
}

/// Maps an upper-tail log probability at `k ≥ n/2` to the p-value's log.
fn log_p_from_tail(n: u64, k: u64, log_upper: f64, tail: TailConvention) -> f64 {
    match tail {
        TailConvention::OneSidedUpper => log_upper.min(0.0),
        TailConvention::TwoSidedSymmetric => {
            if 2 * k == n {
                0.0
            } else {
                (log_upper + std::f64::consts::LN_2).min(0.0)
            }
        }
    }
}

/// Natural log of the sign-test p-value under θ = 1/2.
///
/// Stays finite where [`p_value`] underflows (e.g. `s = n = 10_000`).
pub fn log_p_value(outcome: BinomialOutcome, tail: TailConvention) -> f64 {
    let BinomialOutcome { n, s } = outcome;
    let k = match tail {
        TailConvention::OneSidedUpper => s,
        TailConvention::TwoSidedSymmetric => s.max(n - s),
    };
    log_p_from_tail(n, k, UpperTail::at(n, k), tail)
}

/// Sign-test p-value of `outcome` under θ = 1/2.
pub fn p_value(outcome: BinomialOutcome, tail: TailConvention) -> f64 {
    log_p_value(outcome, tail).exp()
}

/// A selected success count and its exact p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalCount {
    pub s: u64,
    pub p_achieved: f64,
}

/// Finds the success count `s > n/2` whose p-value sits "just at" `alpha`.
///
/// `NearestToAlpha` always succeeds: if no count reaches `alpha` it returns
/// `s = n`. `StrictAtMostAlpha` fails with [`Error::Infeasible`] in that case.
pub fn select_barely_significant(
    n: u64,
    alpha: f64,
    mode: SelectionMode,
    tail: TailConvention,
) -> Result<CriticalCount> {
    if n == 0 {
        return Err(Error::invalid("n", n, "trial count must be at least 1"));
    }
    open_unit("alpha", alpha)?;

    // The candidates are s in (n/2, n]; p(s) grows as s moves inward.
    let lowest = n / 2 + 1;
    let mut strict: Option<CriticalCount> = None;
    let mut first_above: Option<CriticalCount> = None;
    for (s, log_upper) in UpperTail::new(n).take_while(|&(s, _)| s >= lowest) {
        let p = log_p_from_tail(n, s, log_upper, tail).exp();
        let candidate = CriticalCount { s, p_achieved: p };
        if p <= alpha {
            strict = Some(candidate);
        } else {
            first_above = Some(candidate);
            break;
        }
    }

    match mode {
        SelectionMode::StrictAtMostAlpha => strict.ok_or(Error::Infeasible { n, alpha, tail }),
        SelectionMode::NearestToAlpha => Ok(match (strict, first_above) {
            (Some(below), Some(above)) => {
                if alpha - below.p_achieved <= above.p_achieved - alpha {
                    below
                } else {
                    above
                }
            }
            (Some(below), None) => below,
            (None, Some(above)) => above,
            (None, None) => unreachable!("candidate range is never empty"),
        }),
    }
}

/// Whether some success count reaches `p ≤ alpha` with `n` trials.
pub fn is_attainable(n: u64, alpha: f64, tail: TailConvention) -> bool {
    n > 0 && log_p_from_tail(n, n, log_pmf_null(n, n), tail).exp() <= alpha
}

/// Smallest trial count at which `alpha` is attainable at all.
pub fn min_attainable_n(alpha: f64, tail: TailConvention) -> Result<u64> {
    open_unit("alpha", alpha)?;
    Ok((1..)
        .find(|&n| is_attainable(n, alpha, tail))
        .expect("2^-n eventually drops below any positive alpha"))
}
