//! Probability that a replication reproduces the sign of an effect, from
//! the realized (one-tailed) p-value: `p_rep = Φ(Φ⁻¹(1 − p) / √2)`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gaussian::{normal_cdf, upper_critical, Probability};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepReport {
    pub p_in: f64,
    pub p_rep: f64,
    /// `1 − p_rep`.
    pub failure_prob: f64,
}

pub fn p_rep(p: f64) -> Result<PrepReport> {
    let p_in = Probability::new(p)?;
    let z = upper_critical(p_in);
    let p_rep = normal_cdf(z * std::f64::consts::FRAC_1_SQRT_2);
    Ok(PrepReport {
        p_in: p,
        p_rep,
        failure_prob: 1.0 - p_rep,
    })
}
