//! `threshold-lab`: command-line access to the evidence calibration toolkit.
//!
//! Results go to standard output (JSON for single computations, CSV or JSON
//! for sweeps); diagnostics go to standard error. Exit status is 0 on
//! success, 2 for argument errors and 1 when a computation is infeasible or
//! output cannot be written.

use std::fs;
use std::io::{self, Write};
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use threshold_lab::sweep::{default_workers, DEFAULT_ALPHAS, DEFAULT_N_VALUES};
use threshold_lab::{
    achieved_power, diagnosticity_gain, emit, find_crossing, jitter_report, p_rep, posterior_h0,
    required_n, run_sweep_with_workers, select_barely_significant, write_rows, BetaPrior,
    BinomialOutcome, Crossing, EvidenceReport, OperatingPoint, OutputFormat, PointOdds,
    SelectionMode, SweepGrid, TailConvention, ZTestDesign,
};

const THREADS_VAR: &str = "THRESHOLD_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "threshold-lab", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bayes factor and posterior probability of θ = 1/2 for s successes in n trials
    Posterior {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[command(flatten)]
        prior: PriorArgs,
        /// Prior probability of the null
        #[arg(long, default_value_t = 0.5)]
        pi0: f64,
    },
    /// Barely significant success count for n trials at threshold alpha
    Critical {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        test: TestArgs,
    },
    /// Posterior of the null over an (alpha × n) grid
    Sweep {
        /// JSON file holding a list of sample sizes
        /// [default: 20,40,60,80,100,200,400,600,800,1000,2000,4000,6000,8000,10000]
        #[arg(long, value_name = "FILE")]
        grid: Option<PathBuf>,
        /// Comma-separated thresholds, strictly decreasing
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.01,0.001,0.0001")]
        alphas: Vec<f64>,
        #[command(flatten)]
        test: TestArgs,
        #[command(flatten)]
        prior: PriorArgs,
        /// Output format: csv | json
        #[arg(long, default_value = "csv", value_parser = parse_format)]
        format: OutputFormat,
        /// Write to this file instead of standard output
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Also report posterior drops between neighbouring n on standard error
        #[arg(long)]
        jitter: bool,
        /// Emit the grid under both tail conventions (two-sided rows first)
        #[arg(long, conflicts_with = "tail")]
        both_tails: bool,
    },
    /// First n (from the smallest n where alpha is attainable) whose posterior reaches a level
    Crossing {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        level: f64,
        #[arg(long, default_value_t = 20_000)]
        n_max: u64,
        #[command(flatten)]
        test: TestArgs,
        #[command(flatten)]
        prior: PriorArgs,
    },
    /// Probability of replicating an effect's sign from its one-tailed p-value
    Prep {
        #[arg(long)]
        p: f64,
    },
    /// Minimal sample size for a one-sided z-test
    Power {
        #[arg(long, allow_hyphen_values = true)]
        mu0: f64,
        #[arg(long, allow_hyphen_values = true)]
        mu_alt: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        alpha: f64,
        /// Largest acceptable type-II error rate
        #[arg(long)]
        beta: f64,
        /// Also report the power reached at this sample size
        #[arg(long, value_name = "INT")]
        show_power_at: Option<u64>,
    },
    /// Posterior odds for H1 at two (alpha, n) operating points and their ratio
    Diagnosticity {
        #[arg(long, value_name = "ALPHA,N", value_parser = parse_point)]
        a: OperatingPoint,
        #[arg(long, value_name = "ALPHA,N", value_parser = parse_point)]
        b: OperatingPoint,
        #[command(flatten)]
        test: TestArgs,
        #[command(flatten)]
        prior: PriorArgs,
    },
}

#[derive(Debug, Args)]
struct TestArgs {
    /// How the barely significant count is chosen: nearest | strict
    #[arg(long, default_value = "nearest", value_parser = parse_mode)]
    mode: SelectionMode,
    /// Sign-test tail convention: two | one
    #[arg(long, default_value = "two", value_parser = parse_tail)]
    tail: TailConvention,
}

#[derive(Debug, Args)]
struct PriorArgs {
    /// First shape parameter of the Beta prior under H1
    #[arg(long, default_value_t = 1.0)]
    prior_a: f64,
    /// Second shape parameter of the Beta prior under H1
    #[arg(long, default_value_t = 1.0)]
    prior_b: f64,
}

impl PriorArgs {
    fn prior(&self) -> Result<BetaPrior, Failure> {
        Ok(BetaPrior::new(self.prior_a, self.prior_b)?)
    }
}

fn parse_mode(s: &str) -> Result<SelectionMode, String> {
    s.parse().map_err(|e: threshold_lab::Error| e.to_string())
}

fn parse_tail(s: &str) -> Result<TailConvention, String> {
    s.parse().map_err(|e: threshold_lab::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: threshold_lab::Error| e.to_string())
}

fn parse_point(s: &str) -> Result<OperatingPoint, String> {
    let (alpha, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected ALPHA,N, got `{s}`"))?;
    let alpha = alpha
        .trim()
        .parse()
        .map_err(|_| format!("malformed alpha `{alpha}`"))?;
    let n = n.trim().parse().map_err(|_| format!("malformed n `{n}`"))?;
    Ok(OperatingPoint { alpha, n })
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<threshold_lab::Error> for Failure {
    fn from(e: threshold_lab::Error) -> Self {
        match e {
            threshold_lab::Error::InvalidParameter { .. } => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Compute(e.to_string()))?;
    writeln!(io::stdout(), "{text}").map_err(|e| Failure::Compute(format!("stdout: {e}")))
}

fn workers_from_env() -> Result<NonZeroUsize, Failure> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(default_workers()),
        Ok(raw) => raw.trim().parse::<NonZeroUsize>().map_err(|_| {
            Failure::Usage(format!(
                "{THREADS_VAR} = `{raw}`: expected a positive integer"
            ))
        }),
    }
}

fn read_grid_file(path: &PathBuf) -> Result<Vec<u64>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Usage(format!(
            "{}: expected a JSON list of positive integers ({e})",
            path.display()
        ))
    })
}

#[derive(Serialize)]
struct PosteriorOut {
    n: u64,
    s: u64,
    prior_a: f64,
    prior_b: f64,
    #[serde(flatten)]
    report: EvidenceReport,
}

#[derive(Serialize)]
struct CriticalOut {
    n: u64,
    alpha: f64,
    mode: SelectionMode,
    tail: TailConvention,
    s: u64,
    p_achieved: f64,
}

#[derive(Serialize)]
struct CrossingOut {
    alpha: f64,
    level: f64,
    n_max: u64,
    mode: SelectionMode,
    tail: TailConvention,
    crossing: Option<Crossing>,
}

#[derive(Serialize)]
struct PowerAt {
    n: u64,
    power: f64,
}

#[derive(Serialize)]
struct PowerOut {
    mu0: f64,
    mu_alt: f64,
    sigma: f64,
    alpha: f64,
    beta: f64,
    effect_size: f64,
    required_n: u64,
    achieved_power: f64,
    power_at: Option<PowerAt>,
}

#[derive(Serialize)]
struct DiagnosticityOut {
    odds_a: f64,
    odds_b: f64,
    ratio: f64,
    a: PointOdds,
    b: PointOdds,
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Posterior { n, s, prior, pi0 } => {
            let outcome = BinomialOutcome::new(n, s)?;
            let report = posterior_h0(outcome, prior.prior()?, pi0)?;
            print_json(&PosteriorOut {
                n,
                s,
                prior_a: prior.prior_a,
                prior_b: prior.prior_b,
                report,
            })
        }
        Command::Critical { n, alpha, test } => {
            let c = select_barely_significant(n, alpha, test.mode, test.tail)?;
            print_json(&CriticalOut {
                n,
                alpha,
                mode: test.mode,
                tail: test.tail,
                s: c.s,
                p_achieved: c.p_achieved,
            })
        }
        Command::Sweep {
            grid,
            alphas,
            test,
            prior,
            format,
            out,
            jitter,
            both_tails,
        } => {
            let n_values = match &grid {
                Some(path) => read_grid_file(path)?,
                None => DEFAULT_N_VALUES.to_vec(),
            };
            let alphas = if alphas.is_empty() {
                DEFAULT_ALPHAS.to_vec()
            } else {
                alphas
            };
            let tails = if both_tails {
                vec![
                    TailConvention::TwoSidedSymmetric,
                    TailConvention::OneSidedUpper,
                ]
            } else {
                vec![test.tail]
            };
            let prior = prior.prior()?;
            let workers = workers_from_env()?;
            let mut rows = Vec::new();
            for tail in tails {
                let grid =
                    SweepGrid::new(n_values.clone(), alphas.clone(), test.mode, tail, prior)?;
                rows.extend(run_sweep_with_workers(&grid, workers));
            }
            let infeasible = rows.iter().filter(|r| !r.is_feasible()).count();
            if infeasible > 0 {
                eprintln!("note: {infeasible} cell(s) where alpha is unattainable were left empty");
            }
            if jitter {
                for j in jitter_report(&rows) {
                    eprintln!(
                        "jitter: alpha={} n {} -> {} posterior drops by {:.6}",
                        j.alpha, j.n_prev, j.n, j.posterior_drop
                    );
                }
            }
            match out {
                Some(path) => emit(&rows, format, &path)?,
                None => {
                    let stdout = io::stdout();
                    write_rows(&rows, format, stdout.lock())?;
                }
            }
            Ok(())
        }
        Command::Crossing {
            alpha,
            level,
            n_max,
            test,
            prior,
        } => {
            let crossing =
                find_crossing(alpha, level, test.mode, test.tail, prior.prior()?, n_max)?;
            if crossing.is_none() {
                eprintln!("note: posterior stays below {level} up to n = {n_max}");
            }
            print_json(&CrossingOut {
                alpha,
                level,
                n_max,
                mode: test.mode,
                tail: test.tail,
                crossing,
            })
        }
        Command::Prep { p } => print_json(&p_rep(p)?),
        Command::Power {
            mu0,
            mu_alt,
            sigma,
            alpha,
            beta,
            show_power_at,
        } => {
            let design = ZTestDesign::new(mu0, mu_alt, sigma, alpha, beta)?;
            let n = required_n(&design);
            if show_power_at == Some(0) {
                return Err(Failure::Usage(
                    "invalid show-power-at = 0: sample size must be at least 1".into(),
                ));
            }
            print_json(&PowerOut {
                mu0,
                mu_alt,
                sigma,
                alpha,
                beta,
                effect_size: design.effect_size(),
                required_n: n,
                achieved_power: achieved_power(n, &design),
                power_at: show_power_at.map(|n| PowerAt {
                    n,
                    power: achieved_power(n, &design),
                }),
            })
        }
        Command::Diagnosticity { a, b, test, prior } => {
            let gain = diagnosticity_gain(a, b, test.mode, test.tail, prior.prior()?)?;
            print_json(&DiagnosticityOut {
                odds_a: gain.a.odds_h1,
                odds_b: gain.b.odds_h1,
                ratio: gain.ratio,
                a: gain.a,
                b: gain.b,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // help and version exit 0, usage errors exit 2
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
