//! Command-line flags. Every setting is optional here so that the config
//! file and defaults can fill the gaps.

use crate::config::List;
use crate::kinds::{Kernel2dKind, ProcessKind, SignArg, WeightKind};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use wsfbm_core::inference::Family;

#[derive(Debug, Parser)]
#[command(name = "wsfbm", version, about = "Weighted sub-fractional Brownian motion toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Config file of `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_name = "X")]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    pub rel_tol: Option<f64>,
    /// Gram method: 1 Gauss–Kronrod, 2 h-adaptive, 3 p-adaptive, 4 closed form.
    #[arg(long, global = true, value_name = "1-4")]
    pub method: Option<u8>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate paths of the base, OU or geometric process.
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Write the Gram matrix on a grid.
    #[command(allow_negative_numbers = true)]
    Gram(GramArgs),
    /// Maximum-likelihood fit with profile confidence intervals.
    #[command(allow_negative_numbers = true)]
    Fit(FitArgs),
    /// Conditional prediction beyond the fitted observations.
    #[command(allow_negative_numbers = true)]
    Predict(PredictArgs),
    /// Time and compare the Gram methods.
    #[command(allow_negative_numbers = true)]
    Bench(BenchArgs),
    /// Evaluate a d = 2 kernel over a rectangle against a reference point.
    #[command(allow_negative_numbers = true)]
    Kernel2d(Kernel2dArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Gram(_) => "gram",
            Command::Fit(_) => "fit",
            Command::Predict(_) => "predict",
            Command::Bench(_) => "bench",
            Command::Kernel2d(_) => "kernel2d",
        }
    }
}

/// Weight family and parameters: f(u) = u^a (c1) or e^{au} (c2); b = 1 is the log kernel.
#[derive(Debug, Clone, Default, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
}

/// Uniform grid kT/n on [0, T], or explicit positive times.
#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    #[arg(long, value_name = "T")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated increasing positive times; overrides horizon and n.
    #[arg(long)]
    pub times: Option<List<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// wsfbm, ou or geometric.
    #[arg(long)]
    pub process: Option<ProcessKind>,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub paths: Option<usize>,
    /// OU mean-reversion rate.
    #[arg(long)]
    pub beta: Option<f64>,
    /// OU or geometric volatility.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// OU initial value.
    #[arg(long)]
    pub v0: Option<f64>,
    /// Geometric drift.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Geometric initial value.
    #[arg(long)]
    pub s0: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GramArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

/// Observations: a `path_id,t,value` file from `simulate` or a `t,value` file.
#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Path to use from a multi-path file.
    #[arg(long)]
    pub path_id: Option<u64>,
    /// Use only the first N positive observations.
    #[arg(long, value_name = "N")]
    pub fit_points: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// c1 (power law) or c2 (exponential).
    #[arg(long)]
    pub family: Option<Family>,
    /// Fix b instead of estimating it.
    #[arg(long)]
    pub pin_b: Option<f64>,
    /// Confidence level of the profile intervals; 0 skips them.
    #[arg(long)]
    pub level: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Fit file written by `fit`; otherwise family, a and b are required.
    #[arg(long, value_name = "PATH")]
    pub fit: Option<PathBuf>,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Number of future grid steps; defaults to the held-out observations.
    #[arg(long)]
    pub horizon_steps: Option<usize>,
    #[arg(long)]
    pub sims: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, value_name = "T")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub sizes: Option<List<usize>>,
    /// Comma-separated method numbers; `--method` selects a single one.
    #[arg(long)]
    pub methods: Option<List<u8>>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Assemble Gram matrices on all threads.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub parallel: Option<bool>,
}

#[derive(Debug, Clone, Args)]
pub struct Kernel2dArgs {
    /// matern, double-exp, rational-quadratic, periodic, c-af or k-haf.
    #[arg(long)]
    pub kernel: Option<Kernel2dKind>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Hurst index of k-haf.
    #[arg(long)]
    pub hurst: Option<f64>,
    /// Sign of k-haf: minus or plus.
    #[arg(long)]
    pub sign: Option<SignArg>,
    /// Radial weight: power or exp.
    #[arg(long)]
    pub weight: Option<WeightKind>,
    #[arg(long)]
    pub weight_a: Option<f64>,
    /// Centre of the ball A.
    #[arg(long)]
    pub center: Option<List<f64>>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub xmin: Option<f64>,
    #[arg(long)]
    pub xmax: Option<f64>,
    #[arg(long)]
    pub ymin: Option<f64>,
    #[arg(long)]
    pub ymax: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// Reference point p.
    #[arg(long)]
    pub p: Option<List<f64>>,
}
