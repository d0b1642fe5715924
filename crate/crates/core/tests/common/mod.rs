//! Reference computations that share no code with the library: exact
//! rational binomial arithmetic and adaptive quadrature.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use threshold_lab::{SelectionMode, TailConvention};

pub fn binomial_coefficient(n: u64, k: u64) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// `P(X = k)` under Binomial(n, 1/2), exactly.
pub fn exact_pmf(n: u64, k: u64) -> BigRational {
    BigRational::new(binomial_coefficient(n, k), BigInt::one() << n)
}

/// Sign-test p-value by direct summation of exact pmf terms.
pub fn exact_p_value(n: u64, s: u64, tail: TailConvention) -> BigRational {
    let upper = |from: u64| -> BigRational {
        (from..=n).fold(BigRational::zero(), |acc, k| acc + exact_pmf(n, k))
    };
    let lower = |to: u64| -> BigRational {
        (0..=to).fold(BigRational::zero(), |acc, k| acc + exact_pmf(n, k))
    };
    match tail {
        TailConvention::OneSidedUpper => upper(s),
        TailConvention::TwoSidedSymmetric => {
            let hi = s.max(n - s);
            let lo = s.min(n - s);
            let p = upper(hi) + lower(lo);
            if p > BigRational::one() {
                BigRational::one()
            } else {
                p
            }
        }
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Exhaustive selection over every `s` in `(n/2, n]` with exact arithmetic.
pub fn exact_select(n: u64, alpha: f64, mode: SelectionMode, tail: TailConvention) -> Option<u64> {
    let alpha = BigRational::from_float(alpha).expect("finite alpha");
    let candidates: Vec<(u64, BigRational)> = (n / 2 + 1..=n)
        .map(|s| (s, exact_p_value(n, s, tail)))
        .collect();
    match mode {
        SelectionMode::StrictAtMostAlpha => candidates
            .iter()
            .filter(|(_, p)| *p <= alpha)
            .map(|(s, _)| *s)
            .min(),
        SelectionMode::NearestToAlpha => {
            let mut best: Option<(u64, BigRational)> = None;
            for (s, p) in candidates {
                let dist = if p > alpha { &p - &alpha } else { &alpha - &p };
                // iterating upward in s, `<=` hands ties to the larger s
                if best.as_ref().is_none_or(|(_, d)| dist <= *d) {
                    best = Some((s, dist));
                }
            }
            best.map(|(s, _)| s)
        }
    }
}

/// Posterior of `H₀` under Beta(1,1) and equal prior odds, exactly.
pub fn exact_uniform_posterior(n: u64, s: u64) -> f64 {
    let l0 = exact_pmf(n, s);
    let l1 = BigRational::new(BigInt::one(), BigInt::from(n + 1));
    to_f64(&(l0.clone() / (l0 + l1)))
}

/// Adaptive Simpson integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// `∫ C(n,s) θ^s (1−θ)^(n−s) Beta(θ; a, b) dθ` with the Beta normalizer
/// itself obtained by quadrature.
pub fn quadrature_marginal(n: u64, s: u64, a: f64, b: f64) -> f64 {
    let kernel = |t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0);
    let normalizer = integrate(&kernel, 0.0, 1.0, 1e-16);
    let coeff = binomial_coefficient(n, s).to_f64().unwrap();
    let (sf, ff) = (s as f64, (n - s) as f64);
    let integrand = |t: f64| coeff * t.powf(sf) * (1.0 - t).powf(ff) * kernel(t);
    // scale the tolerance to the integral's size
    let rough = integrate(&integrand, 0.0, 1.0, 1e-10);
    integrate(&integrand, 0.0, 1.0, rough.abs() * 1e-14) / normalizer
}
