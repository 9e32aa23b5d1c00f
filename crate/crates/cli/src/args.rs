use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Free multiplicative convolution, subordination and free perpetuity solver.
#[derive(Debug, Parser, Serialize)]
#[command(name = "fperp", version, about)]
pub struct Cli {
    /// Worker threads (defaults to the number of available cores).
    #[arg(long, global = true, env = "FPERP_THREADS")]
    pub threads: Option<usize>,

    /// Print per-iteration and per-point detail on standard output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate ψ, χ, S or the Cauchy transform of a measure on a point list.
    Transform(TransformArgs),
    /// Scaled moments of the free multiplicative powers of a measure.
    MultPower(MultPowerArgs),
    /// Solve the subordination system of X and (A, B) on a grid of z.
    Subordinate(SubordinateArgs),
    /// Solve the free perpetuity X = A^{1/2} X A^{1/2} + B.
    Perpetuity(PerpetuityArgs),
    /// Measure the tail of a law and compare with the critical prediction.
    Tails(TailsArgs),
    /// Random-matrix Monte Carlo estimate of a perpetuity or a free power.
    Oracle(OracleArgs),
    /// Run the built-in invariant checks and print a pass/fail table.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum What {
    Psi,
    Chi,
    S,
    Cauchy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeArg {
    Positive,
    Symmetric,
}

#[derive(Debug, Args, Serialize)]
pub struct TransformArgs {
    /// Measure JSON file or `builtin:name(params)` shorthand.
    #[arg(long)]
    pub measure: String,
    #[arg(long, value_enum)]
    pub what: What,
    /// CSV of points: a header row, then `re[,im]` per line.
    #[arg(long)]
    pub points: PathBuf,
    /// Output CSV with columns point_re, point_im, value_re, value_im.
    #[arg(long, default_value = "transform.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct MultPowerArgs {
    /// Measure JSON file or `builtin:name(params)` shorthand; must have unit mean.
    #[arg(long)]
    pub measure: String,
    /// Largest power; the trend runs over 1, 2, 5, 10, 20, 50, … up to it.
    #[arg(long)]
    pub n: u64,
    /// Fractional order in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Integer moment order to report alongside the fractional one.
    #[arg(long)]
    pub p: Option<usize>,
    /// CSV trend report with columns order, n, scaled, predicted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SubordinateArgs {
    /// Law of X.
    #[arg(long)]
    pub x: String,
    /// Joint law of (A, B) as JSON.
    #[arg(long)]
    pub joint: PathBuf,
    /// CSV of z values: a header row, then `re[,im]` per line.
    #[arg(long = "z-grid")]
    pub z_grid: PathBuf,
    #[arg(long, default_value = "sub.csv")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 10_000)]
    pub max_iter: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PerpetuityArgs {
    /// Joint law of (A, B) as JSON.
    #[arg(long)]
    pub joint: PathBuf,
    #[arg(long, value_enum, default_value = "positive")]
    pub regime: RegimeArg,
    #[arg(long, default_value = "x.json")]
    pub out: PathBuf,
    /// CSV with columns iteration, levy_step, tail_alpha, tail_c.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Stop once successive iterates are this close in Lévy distance.
    #[arg(long = "levy-tol", default_value_t = 1e-4)]
    pub levy_tol: f64,
    #[arg(long = "max-outer", default_value_t = 200)]
    pub max_outer: usize,
    /// Starting law (defaults to one affine step from the point mass at 0).
    #[arg(long)]
    pub init: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct TailsArgs {
    /// Measure JSON file or `builtin:name(params)` shorthand.
    #[arg(long)]
    pub measure: String,
    #[arg(long, value_enum, default_value = "positive")]
    pub regime: RegimeArg,
    /// Joint law of a critical model whose predicted tail is compared.
    #[arg(long = "predict-from")]
    pub predict_from: Option<PathBuf>,
    /// Exponent hint for the fit (defaults to the prediction, if any).
    #[arg(long = "exponent-hint")]
    pub exponent_hint: Option<f64>,
    #[arg(long, default_value = "tail.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    /// Joint law of (A, B): sample the perpetuity series.
    #[arg(long, conflicts_with_all = ["measure", "power"], required_unless_present = "measure")]
    pub joint: Option<PathBuf>,
    /// Law whose free multiplicative power is sampled.
    #[arg(long, requires = "power")]
    pub measure: Option<String>,
    /// Number of factors in the free multiplicative power.
    #[arg(long, requires = "measure")]
    pub power: Option<usize>,
    /// Matrix dimension.
    #[arg(long = "N", default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Terms of the perpetuity series.
    #[arg(long, default_value_t = 60)]
    pub terms: usize,
    #[arg(long)]
    pub seed: u64,
    /// Pooled eigenvalues as a measure JSON document.
    #[arg(long, default_value = "emp.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Nc,
    Measure,
    Transforms,
    MultPower,
    Subordination,
    Perpetuity,
    Tails,
    Oracle,
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    #[arg(value_enum, default_value = "all")]
    pub suite: Suite,
}
