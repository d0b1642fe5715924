//! One-sided z-test power and sample size, and the posterior-odds gain
//! between two (α, N) operating points.

use serde::{Deserialize, Serialize};

use crate::binomial::{SelectionMode, TailConvention};
use crate::error::{open_unit, Error, Result};
use crate::evidence::{evidence_at_threshold, BetaPrior};
use crate::gaussian::{normal_cdf, upper_critical, Probability};

/// A one-sided z-test of `μ = mu0` against `μ = mu_alt` with known σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZTestDesign {
    mu0: f64,
    mu_alt: f64,
    sigma: f64,
    alpha: f64,
    beta: f64,
}

impl ZTestDesign {
    pub fn new(mu0: f64, mu_alt: f64, sigma: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !mu0.is_finite() {
            return Err(Error::invalid("mu0", mu0, "must be finite"));
        }
        if !mu_alt.is_finite() || mu_alt == mu0 {
            return Err(Error::invalid(
                "mu_alt",
                mu_alt,
                "must be finite and differ from mu0",
            ));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(
                "sigma",
                sigma,
                "must be positive and finite",
            ));
        }
        open_unit("alpha", alpha)?;
        open_unit("beta", beta)?;
        Ok(Self {
            mu0,
            mu_alt,
            sigma,
            alpha,
            beta,
        })
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn mu_alt(&self) -> f64 {
        self.mu_alt
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Standardized effect `|mu_alt − mu0| / σ`.
    pub fn effect_size(&self) -> f64 {
        (self.mu_alt - self.mu0).abs() / self.sigma
    }

    fn z_alpha(&self) -> f64 {
        upper_critical(Probability::new(self.alpha).expect("validated"))
    }

    fn z_beta(&self) -> f64 {
        upper_critical(Probability::new(self.beta).expect("validated"))
    }
}

/// `Φ(δ √n / σ − z₁₋α)`.
pub fn achieved_power(n: u64, design: &ZTestDesign) -> f64 {
    normal_cdf(design.effect_size() * (n as f64).sqrt() - design.z_alpha())
}

/// Smallest `n` whose power reaches `1 − β`.
pub fn required_n(design: &ZTestDesign) -> u64 {
    let target = 1.0 - design.beta;
    let root_n = (design.z_alpha() + design.z_beta()) / design.effect_size();
    let mut n = (root_n * root_n).ceil().max(1.0) as u64;
    // The closed form can land one off where the power sits on 1 − β.
    while n > 1 && achieved_power(n - 1, design) >= target {
        n -= 1;
    }
    while achieved_power(n, design) < target {
        n += 1;
    }
    n
}

/// A significance threshold paired with a sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub alpha: f64,
    pub n: u64,
}

/// Posterior odds for `H₁` at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointOdds {
    pub alpha: f64,
    pub n: u64,
    pub s: u64,
    pub p_achieved: f64,
    pub posterior_h0: f64,
    pub odds_h1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticityGain {
    pub a: PointOdds,
    pub b: PointOdds,
    /// `b.odds_h1 / a.odds_h1`.
    pub ratio: f64,
}

/// Compares the binomial posterior odds of a just-significant result at two
/// operating points.
pub fn diagnosticity_gain(
    point_a: OperatingPoint,
    point_b: OperatingPoint,
    mode: SelectionMode,
    tail: TailConvention,
    prior: BetaPrior,
) -> Result<DiagnosticityGain> {
    let odds_at = |point: OperatingPoint| -> Result<PointOdds> {
        let ev = evidence_at_threshold(point.n, point.alpha, mode, tail, prior)?;
        Ok(PointOdds {
            alpha: point.alpha,
            n: point.n,
            s: ev.critical.s,
            p_achieved: ev.critical.p_achieved,
            posterior_h0: ev.report.posterior_h0,
            odds_h1: ev.report.posterior_odds_h1,
        })
    };
    let a = odds_at(point_a)?;
    let b = odds_at(point_b)?;
    Ok(DiagnosticityGain {
        a,
        b,
        ratio: b.odds_h1 / a.odds_h1,
    })
}
