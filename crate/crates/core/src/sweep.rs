//! Posterior-of-H₀ grids over significance thresholds and sample sizes,
//! first-touch crossing search, and monotonicity diagnostics.

use std::num::NonZeroUsize;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::binomial::{is_attainable, min_attainable_n, SelectionMode, TailConvention};
use crate::error::{open_unit, Error, Result};
use crate::evidence::{evidence_at_threshold, BetaPrior};

/// Sample sizes evaluated by default.
pub const DEFAULT_N_VALUES: [u64; 15] = [
    20, 40, 60, 80, 100, 200, 400, 600, 800, 1000, 2000, 4000, 6000, 8000, 10000,
];

/// Thresholds evaluated by default.
pub const DEFAULT_ALPHAS: [f64; 4] = [0.05, 0.01, 0.001, 0.0001];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    n_values: Vec<u64>,
    alphas: Vec<f64>,
    mode: SelectionMode,
    tail: TailConvention,
    prior: BetaPrior,
}

impl SweepGrid {
    /// `n_values` must be strictly increasing and `alphas` strictly
    /// decreasing; neither may be empty.
    pub fn new(
        n_values: Vec<u64>,
        alphas: Vec<f64>,
        mode: SelectionMode,
        tail: TailConvention,
        prior: BetaPrior,
    ) -> Result<Self> {
        if n_values.is_empty() {
            return Err(Error::invalid(
                "n values",
                "[]",
                "grid needs at least one sample size",
            ));
        }
        if n_values[0] == 0 {
            return Err(Error::invalid(
                "n values",
                0,
                "sample sizes must be positive",
            ));
        }
        if let Some(w) = n_values.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "n values",
                format!("{} then {}", w[0], w[1]),
                "must be strictly increasing",
            ));
        }
        if alphas.is_empty() {
            return Err(Error::invalid(
                "alphas",
                "[]",
                "grid needs at least one threshold",
            ));
        }
        for &alpha in &alphas {
            open_unit("alpha", alpha)?;
        }
        if let Some(w) = alphas.windows(2).find(|w| w[0] <= w[1]) {
            return Err(Error::invalid(
                "alphas",
                format!("{} then {}", w[0], w[1]),
                "must be strictly decreasing",
            ));
        }
        Ok(Self {
            n_values,
            alphas,
            mode,
            tail,
            prior,
        })
    }

    pub fn n_values(&self) -> &[u64] {
        &self.n_values
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn mode(&self) -> SelectionMode {
        self.mode
    }

    pub fn tail(&self) -> TailConvention {
        self.tail
    }

    pub fn prior(&self) -> BetaPrior {
        self.prior
    }

    pub fn len(&self) -> usize {
        self.n_values.len() * self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn cell(&self, index: usize) -> (f64, u64) {
        let per_alpha = self.n_values.len();
        (
            self.alphas[index / per_alpha],
            self.n_values[index % per_alpha],
        )
    }
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            n_values: DEFAULT_N_VALUES.to_vec(),
            alphas: DEFAULT_ALPHAS.to_vec(),
            mode: SelectionMode::default(),
            tail: TailConvention::default(),
            prior: BetaPrior::default(),
        }
    }
}

/// One `(α, n)` cell. The result fields are `None` when no success count
/// reaches α at this `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub n: u64,
    pub s_selected: Option<u64>,
    pub p_achieved: Option<f64>,
    pub log_bf01: Option<f64>,
    pub posterior_h0: Option<f64>,
    pub mode: SelectionMode,
    pub tail: TailConvention,
}

impl SweepRow {
    pub fn is_feasible(&self) -> bool {
        self.s_selected.is_some()
    }
}

fn evaluate(grid: &SweepGrid, alpha: f64, n: u64) -> SweepRow {
    let mut row = SweepRow {
        alpha,
        n,
        s_selected: None,
        p_achieved: None,
        log_bf01: None,
        posterior_h0: None,
        mode: grid.mode,
        tail: grid.tail,
    };
    if !is_attainable(n, alpha, grid.tail) {
        return row;
    }
    if let Ok(ev) = evidence_at_threshold(n, alpha, grid.mode, grid.tail, grid.prior) {
        row.s_selected = Some(ev.critical.s);
        row.p_achieved = Some(ev.critical.p_achieved);
        row.log_bf01 = Some(ev.report.log_bf01);
        row.posterior_h0 = Some(ev.report.posterior_h0);
    }
    row
}

/// Worker count from the machine's available parallelism.
pub fn default_workers() -> NonZeroUsize {
    thread::available_parallelism().unwrap_or(NonZeroUsize::MIN)
}

/// Evaluates every cell, α-major then n-minor.
pub fn run_sweep(grid: &SweepGrid) -> Vec<SweepRow> {
    run_sweep_with_workers(grid, default_workers())
}

/// As [`run_sweep`] with an explicit worker count; output does not depend
/// on it.
pub fn run_sweep_with_workers(grid: &SweepGrid, workers: NonZeroUsize) -> Vec<SweepRow> {
    let total = grid.len();
    let workers = workers.get().min(total.max(1));
    if workers == 1 {
        return (0..total)
            .map(|i| {
                let (alpha, n) = grid.cell(i);
                evaluate(grid, alpha, n)
            })
            .collect();
    }

    let mut slots: Vec<Option<SweepRow>> = vec![None; total];
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    // Strided so large-n cells spread across workers.
                    (w..total)
                        .step_by(workers)
                        .map(|i| {
                            let (alpha, n) = grid.cell(i);
                            (i, evaluate(grid, alpha, n))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (i, row) in handle.join().expect("sweep worker panicked") {
                slots[i] = Some(row);
            }
        }
    });
    slots
        .into_iter()
        .map(|row| row.expect("every cell evaluated"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub n: u64,
    pub s: u64,
    pub p_achieved: f64,
    pub posterior_h0: f64,
}

/// First sample size at which the posterior of `H₀` reaches `level`.
///
/// The scan starts at the smallest `n` where α is attainable at all (below
/// it no result can be significant) and walks upward one `n` at a time.
/// Because the curve jitters, this is the first touch, not the point after
/// which the posterior stays above `level`. Returns `None` if `level` is
/// not reached by `n_max`.
pub fn find_crossing(
    alpha: f64,
    level: f64,
    mode: SelectionMode,
    tail: TailConvention,
    prior: BetaPrior,
    n_max: u64,
) -> Result<Option<Crossing>> {
    open_unit("level", level)?;
    let start = min_attainable_n(alpha, tail)?;
    for n in start..=n_max {
        let ev = evidence_at_threshold(n, alpha, mode, tail, prior)?;
        if ev.report.posterior_h0 >= level {
            return Ok(Some(Crossing {
                n,
                s: ev.critical.s,
                p_achieved: ev.critical.p_achieved,
                posterior_h0: ev.report.posterior_h0,
            }));
        }
    }
    Ok(None)
}

/// A place where the posterior falls although `n` grew.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterEntry {
    pub alpha: f64,
    pub n_prev: u64,
    pub n: u64,
    pub posterior_drop: f64,
}

/// Lists every adjacent pair of feasible rows within one α-series where the
/// posterior decreases as `n` increases.
pub fn jitter_report(rows: &[SweepRow]) -> Vec<JitterEntry> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, u64, f64)> = None;
    for row in rows {
        if prev.is_some_and(|(alpha, _, _)| alpha != row.alpha) {
            prev = None;
        }
        let Some(post) = row.posterior_h0 else {
            continue;
        };
        if let Some((alpha, n_prev, prev_post)) = prev {
            if post < prev_post {
                out.push(JitterEntry {
                    alpha,
                    n_prev,
                    n: row.n,
                    posterior_drop: prev_post - post,
                });
            }
        }
        prev = Some((row.alpha, row.n, post));
    }
    out
}
