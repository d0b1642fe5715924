//! Standard-normal CDF and quantile.
//!
//! The CDF goes through the error function: a positive-term power series
//! for `erf` on small arguments and a Lentz-evaluated continued fraction for
//! `erfc` in the tails, so both `Φ(z)` and `1 − Φ(z)` keep full relative
//! precision far out. The quantile starts from Acklam's rational
//! approximation and takes one Newton step against the CDF.

use serde::{Deserialize, Serialize};

use crate::error::{open_unit, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Above this `erfc` comes from the continued fraction.
const ERFC_CF_MIN: f64 = 1.5;

/// A probability strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        open_unit("probability", value).map(Probability)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = crate::Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

fn erf_series(x: f64) -> f64 {
    // erf(x) = 2/√π · e^{-x²} · Σ 2ⁿ x^{2n+1} / (2n+1)!!
    let two_x2 = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 1.0;
    while term > sum * 1e-17 {
        k += 2.0;
        term *= two_x2 / k;
        sum += term;
    }
    FRAC_2_SQRT_PI * (-x * x).exp() * sum
}

fn erfc_continued_fraction(x: f64) -> f64 {
    // erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = f64::from(k) * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (std::f64::consts::PI.sqrt() * f)
}

/// Complementary error function for `x ≥ 0`.
fn erfc_nonneg(x: f64) -> f64 {
    if x < ERFC_CF_MIN {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// `P(Z > |z|)`, with relative precision in the far tail.
fn upper_tail_abs(z: f64) -> f64 {
    0.5 * erfc_nonneg(z.abs() * std::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// `Φ(z)`.
pub fn normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let tail = upper_tail_abs(z);
    if z >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// `1 − Φ(z)` without cancellation for large positive `z`.
pub fn normal_sf(z: f64) -> f64 {
    normal_cdf(-z)
}

/// Acklam's rational approximation to Φ⁻¹, relative error about 1.15e-9.
fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// `Φ⁻¹(q)`.
pub fn normal_quantile(q: Probability) -> f64 {
    let p = q.get();
    if p > 0.5 {
        // Solve in the lower tail where the CDF carries relative precision.
        return -lower_quantile(1.0 - p);
    }
    lower_quantile(p)
}

fn lower_quantile(p: f64) -> f64 {
    let x = acklam(p);
    let density = normal_pdf(x);
    if density == 0.0 {
        return x;
    }
    x - (normal_cdf(x) - p) / density
}

/// Upper-tail critical value `z` with `P(Z > z) = tail`.
pub fn upper_critical(tail: Probability) -> f64 {
    -normal_quantile(tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prob(p: f64) -> Probability {
        Probability::new(p).unwrap()
    }

    #[test]
    fn cdf_center_and_known_points() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.6449) - 0.95).abs() < 1e-4);
        assert!((normal_cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-14);
    }

    #[test]
    fn cdf_reflection() {
        let mut z = -8.0;
        while z <= 8.0 {
            assert!(
                (normal_cdf(-z) - (1.0 - normal_cdf(z))).abs() < 1e-13,
                "z={z}"
            );
            z += 0.125;
        }
    }

    #[test]
    fn series_and_fraction_agree_at_switch() {
        let below = 1.0 - erf_series(ERFC_CF_MIN);
        let above = erfc_continued_fraction(ERFC_CF_MIN);
        assert!(((below - above) / above).abs() < 1e-14);
    }

    #[test]
    fn quantile_known_points() {
        assert_eq!(normal_quantile(prob(0.5)), 0.0);
        assert!((normal_quantile(prob(0.975)) - 1.959_964).abs() < 1e-5);
        assert!((normal_quantile(prob(0.99)) - 2.326_348).abs() < 1e-5);
        assert!((upper_critical(prob(0.05)) - 1.644_853_626_951_472_2).abs() < 1e-12);
    }

    #[test]
    fn probability_rejects_closed_endpoints() {
        for v in [0.0, 1.0, -1e-9, 1.5, f64::NAN] {
            assert!(Probability::new(v).is_err(), "{v}");
        }
        assert!(Probability::try_from(0.3).is_ok());
    }
}
