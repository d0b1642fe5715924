//! Exact evidence calibration for "just significant" sign-test results.
//!
//! For a significance threshold α and a number of trials `N`, the crate finds
//! the success count that makes a two-sided sign test barely significant,
//! then asks how much that result actually moves a Bayesian: the Bayes
//! factor of `θ = 1/2` against a Beta prior on θ, and the posterior
//! probability of the null. Alongside sit the p → p_rep replicability
//! transform and one-sided z-test power analysis, so the cost of a stricter
//! threshold (larger `N`) can be weighed against its evidential gain.
//!
//! ```
//! use threshold_lab::{evidence_at_threshold, BetaPrior, SelectionMode, TailConvention};
//!
//! let point = evidence_at_threshold(
//!     100,
//!     0.05,
//!     SelectionMode::NearestToAlpha,
//!     TailConvention::TwoSidedSymmetric,
//!     BetaPrior::UNIFORM,
//! )
//! .unwrap();
//! assert_eq!(point.critical.s, 60);
//! assert!((point.report.posterior_h0 - 0.52).abs() < 0.01);
//! ```

pub mod binomial;
pub mod emit;
pub mod error;
pub mod evidence;
pub mod gaussian;
pub mod power;
pub mod replicability;
pub mod special;
pub mod sweep;

pub use binomial::{
    is_attainable, log_p_value, log_pmf, min_attainable_n, p_value, select_barely_significant,
    BinomialModel, BinomialOutcome, CriticalCount, SelectionMode, TailConvention,
};
pub use emit::{emit, read_csv, write_rows, OutputFormat};
pub use error::{Error, Result};
pub use evidence::{
    evidence_at_threshold, log_marginal_h1, posterior_h0, BetaPrior, EvidenceReport,
    ThresholdEvidence,
};
pub use gaussian::{normal_cdf, normal_quantile, normal_sf, Probability};
pub use power::{
    achieved_power, diagnosticity_gain, required_n, DiagnosticityGain, OperatingPoint, PointOdds,
    ZTestDesign,
};
pub use replicability::{p_rep, PrepReport};
pub use sweep::{
    find_crossing, jitter_report, run_sweep, run_sweep_with_workers, Crossing, JitterEntry,
    SweepGrid, SweepRow,
};
