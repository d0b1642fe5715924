mod common;

use common::{
    exact_p_value, exact_pmf, exact_select, exact_uniform_posterior, quadrature_marginal, to_f64,
};
use threshold_lab::sweep::DEFAULT_N_VALUES;
use threshold_lab::{
    achieved_power, diagnosticity_gain, evidence_at_threshold, jitter_report, log_marginal_h1,
    log_pmf, normal_cdf, normal_quantile, p_rep, p_value, posterior_h0, required_n, run_sweep,
    select_barely_significant, BetaPrior, BinomialModel, BinomialOutcome, OperatingPoint,
    Probability, SelectionMode, SweepGrid, TailConvention, ZTestDesign,
};

const NEAREST: SelectionMode = SelectionMode::NearestToAlpha;
const STRICT: SelectionMode = SelectionMode::StrictAtMostAlpha;
const TWO: TailConvention = TailConvention::TwoSidedSymmetric;

fn outcome(n: u64, s: u64) -> BinomialOutcome {
    BinomialOutcome::new(n, s).unwrap()
}

fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

#[test]
fn pmf_central_term_matches_exact_ratio() {
    let want = to_f64(&exact_pmf(100, 50));
    let got = log_pmf(outcome(100, 50), BinomialModel::NULL).exp();
    assert!(rel_err(got, want) < 1e-12, "{got} vs {want}");
    assert!((got - 0.0796).abs() < 1e-4);
}

#[test]
fn two_sided_p_values_at_n_100() {
    for (s, approx) in [(61, 0.0352), (60, 0.0569)] {
        let want = to_f64(&exact_p_value(100, s, TWO));
        let got = p_value(outcome(100, s), TWO);
        assert!(rel_err(got, want) < 1e-12, "s={s}");
        assert!((got - approx).abs() < 1e-4, "s={s}: {got}");
    }
}

#[test]
fn one_sided_p_values_match_exact_sums() {
    for (n, s) in [(30, 20), (57, 40), (200, 120), (15, 0), (15, 15)] {
        let want = to_f64(&exact_p_value(n, s, TailConvention::OneSidedUpper));
        let got = p_value(outcome(n, s), TailConvention::OneSidedUpper);
        assert!(rel_err(got, want) < 1e-12, "n={n} s={s}");
    }
}

#[test]
fn barely_significant_counts_at_n_100() {
    let near = select_barely_significant(100, 0.05, NEAREST, TWO).unwrap();
    assert_eq!(near.s, 60);
    assert!((near.p_achieved - 0.0569).abs() < 1e-4);

    let strict = select_barely_significant(100, 0.05, STRICT, TWO).unwrap();
    assert_eq!(strict.s, 61);
    assert!((strict.p_achieved - 0.0352).abs() < 1e-4);

    let one_pct = select_barely_significant(100, 0.01, NEAREST, TWO).unwrap();
    assert_eq!(one_pct.s, 63);
    assert!((one_pct.p_achieved - 0.0121).abs() < 1e-4);

    for (alpha, mode, s) in [(0.05, NEAREST, 60), (0.05, STRICT, 61), (0.01, NEAREST, 63)] {
        assert_eq!(exact_select(100, alpha, mode, TWO), Some(s));
    }
}

#[test]
fn marginal_with_informative_prior_matches_quadrature() {
    let prior = BetaPrior::new(2.0, 3.0).unwrap();
    let got = log_marginal_h1(outcome(10, 7), prior).exp();
    let want = quadrature_marginal(10, 7, 2.0, 3.0);
    assert!(rel_err(got, want) < 1e-9, "{got} vs {want}");

    let prior = BetaPrior::new(1.5, 2.25).unwrap();
    let got = log_marginal_h1(outcome(25, 9), prior).exp();
    let want = quadrature_marginal(25, 9, 1.5, 2.25);
    assert!(rel_err(got, want) < 1e-9, "{got} vs {want}");
}

#[test]
fn posterior_at_n_100() {
    let at_60 = posterior_h0(outcome(100, 60), BetaPrior::UNIFORM, 0.5).unwrap();
    assert!((at_60.posterior_h0 - 0.52).abs() <= 0.01);
    // cross-check: l0 = C(100,60)/2^100, l1 = 1/101
    assert!(rel_err(at_60.posterior_h0, exact_uniform_posterior(100, 60)) < 1e-12);

    let at_63 = posterior_h0(outcome(100, 63), BetaPrior::UNIFORM, 0.5).unwrap();
    assert!((at_63.posterior_h0 - 0.22).abs() <= 0.01);

    let tiny = posterior_h0(outcome(2, 1), BetaPrior::UNIFORM, 0.5).unwrap();
    assert!((tiny.posterior_h0 - 0.6).abs() < 1e-15);
}

#[test]
fn evidence_at_strict_thresholds() {
    let e4 = evidence_at_threshold(100, 0.0001, NEAREST, TWO, BetaPrior::UNIFORM).unwrap();
    assert!(e4.report.posterior_h0 < 0.01);

    let e3 = evidence_at_threshold(100, 0.001, NEAREST, TWO, BetaPrior::UNIFORM).unwrap();
    assert!(e3.report.posterior_h0 < 0.06);
    // exact value: s = 67, posterior 0.02294096013120055
    assert_eq!(e3.critical.s, 67);
    assert!(rel_err(e3.report.posterior_h0, 0.022_940_960_131_200_55) < 1e-12);
}

#[test]
fn evidence_at_n_20_matches_exhaustive_oracle() {
    let ev = evidence_at_threshold(20, 0.05, NEAREST, TWO, BetaPrior::UNIFORM).unwrap();
    let s = exact_select(20, 0.05, NEAREST, TWO).unwrap();
    assert_eq!(ev.critical.s, s);
    let want = exact_uniform_posterior(20, s);
    assert!(rel_err(ev.report.posterior_h0, want) < 1e-12);
    // frozen from the oracle: s = 15, posterior = 0.23693310822611632
    assert_eq!(s, 15);
    assert!(rel_err(want, 0.236_933_108_226_116_32) < 1e-15);
}

// Φ and Φ⁻¹ reference values from 40-digit arithmetic.
const CDF_TABLE: [(f64, f64); 12] = [
    (-8.0, 6.220_960_574_271_784e-16),
    (-6.0, 9.865_876_450_376_98e-10),
    (-5.0, 2.866_515_718_791_939e-7),
    (-3.5, 2.326_290_790_355_250_4e-4),
    (-2.0, 0.022_750_131_948_179_21),
    (-1.0, 0.158_655_253_931_457_05),
    (-0.25, 0.401_293_674_317_076_3),
    (0.5, 0.691_462_461_274_013_1),
    (1.6449, 0.950_004_782_531_653_7),
    (2.5, 0.993_790_334_674_224),
    (4.0, 0.999_968_328_758_166_9),
    (7.5, 0.999_999_999_999_968_1),
];

const QUANTILE_TABLE: [(f64, f64); 8] = [
    (1e-10, -6.361_340_902_404_056),
    (1e-6, -4.753_424_308_822_899),
    (0.001, -3.090_232_306_167_813_5),
    (0.025, -1.959_963_984_540_054_2),
    (0.3, -0.524_400_512_708_040_8),
    (0.975, 1.959_963_984_540_054_2),
    (0.99, 2.326_347_874_040_841),
    (0.999_999, 4.753_424_308_822_899),
];

#[test]
fn normal_cdf_against_reference() {
    for (z, want) in CDF_TABLE {
        let got = normal_cdf(z);
        assert!((got - want).abs() < 1e-12, "z={z}: {got} vs {want}");
        if z < 0.0 {
            assert!(rel_err(got, want) < 1e-12, "lower tail z={z}");
        }
    }
    assert!((normal_cdf(1.6449) - 0.95).abs() < 1e-4);
}

#[test]
fn normal_quantile_against_reference() {
    for (q, want) in QUANTILE_TABLE {
        let got = normal_quantile(Probability::new(q).unwrap());
        assert!((got - want).abs() < 1e-9, "q={q}: {got} vs {want}");
    }
}

#[test]
fn replicability_values() {
    for (p, want, fail) in [
        (0.05, 0.877, 0.123),
        (0.01, 0.950, 0.050),
        (0.001, 0.986, 0.014),
        (0.0001, 0.996, 0.004),
    ] {
        let r = p_rep(p).unwrap();
        assert!((r.p_rep - want).abs() <= 0.001, "p={p}: {}", r.p_rep);
        assert!(
            (r.failure_prob - fail).abs() <= 0.001,
            "p={p}: {}",
            r.failure_prob
        );
    }
    assert_eq!(p_rep(0.5).unwrap().p_rep, 0.5);
}

#[test]
fn power_worked_example() {
    let d05 = ZTestDesign::new(40.0, 43.0, 8.0, 0.05, 0.02).unwrap();
    let d01 = ZTestDesign::new(40.0, 43.0, 8.0, 0.01, 0.02).unwrap();
    assert_eq!(required_n(&d05), 98);
    assert_eq!(required_n(&d01), 137);
    assert!(achieved_power(98, &d05) >= 0.98);
    assert!(achieved_power(97, &d05) < 0.98);
    let unit = ZTestDesign::new(0.0, 1.0, 1.0, 0.05, 0.5).unwrap();
    assert_eq!(required_n(&unit), 3);
}

#[test]
fn diagnosticity_examples() {
    let g = diagnosticity_gain(
        OperatingPoint { alpha: 0.05, n: 98 },
        OperatingPoint {
            alpha: 0.01,
            n: 137,
        },
        NEAREST,
        TWO,
        BetaPrior::UNIFORM,
    )
    .unwrap();
    assert!((0.5..=1.5).contains(&g.a.odds_h1), "{}", g.a.odds_h1);
    assert!((1.5..=4.5).contains(&g.b.odds_h1), "{}", g.b.odds_h1);

    let steep = diagnosticity_gain(
        OperatingPoint {
            alpha: 0.05,
            n: 100,
        },
        OperatingPoint {
            alpha: 0.0001,
            n: 100,
        },
        NEAREST,
        TWO,
        BetaPrior::UNIFORM,
    )
    .unwrap();
    assert!(steep.ratio > 30.0, "{}", steep.ratio);

    let strict_infeasible = diagnosticity_gain(
        OperatingPoint { alpha: 0.05, n: 4 },
        OperatingPoint {
            alpha: 0.01,
            n: 137,
        },
        STRICT,
        TWO,
        BetaPrior::UNIFORM,
    );
    assert!(strict_infeasible.is_err());
}

#[test]
fn jitter_on_small_n_matches_exact_recomputation() {
    let small: Vec<u64> = DEFAULT_N_VALUES
        .iter()
        .copied()
        .filter(|&n| n <= 200)
        .collect();
    let alphas = vec![0.05, 0.01];
    let grid = SweepGrid::new(
        small.clone(),
        alphas.clone(),
        NEAREST,
        TWO,
        BetaPrior::UNIFORM,
    )
    .unwrap();
    let report = jitter_report(&run_sweep(&grid));

    let mut expected = Vec::new();
    for &alpha in &alphas {
        let post: Vec<f64> = small
            .iter()
            .map(|&n| exact_uniform_posterior(n, exact_select(n, alpha, NEAREST, TWO).unwrap()))
            .collect();
        for i in 1..small.len() {
            if post[i] < post[i - 1] {
                expected.push((alpha, small[i - 1], small[i]));
            }
        }
    }
    let got: Vec<_> = report.iter().map(|j| (j.alpha, j.n_prev, j.n)).collect();
    assert_eq!(got, expected);
    // α = .05 rises cleanly on this grid; α = .01 dips twice
    assert_eq!(got, vec![(0.01, 20, 40), (0.01, 60, 80)]);
}

#[test]
fn jitter_fades_at_large_n() {
    let rows = run_sweep(&SweepGrid::default());
    let late = jitter_report(&rows)
        .into_iter()
        .filter(|j| j.n_prev >= 1000)
        .count();
    assert!(late <= 1, "{late} violations at n >= 1000");
}
