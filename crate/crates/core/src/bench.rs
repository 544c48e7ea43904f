//! Timing and cross-method accuracy of Gram assembly by methods 1–4.

use crate::inference::{kernel_spec, Family, InferenceError};
use crate::kernels::{gram, GramMethod, KernelError, TimeGrid};
use crate::quadrature::QuadConfig;
use nalgebra::DMatrix;
use std::fmt::Write as _;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("invalid bench configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub family: Family,
    pub a: f64,
    pub b: f64,
    /// Grid tₖ = kT/n on [0, T].
    pub horizon: f64,
    pub sizes: Vec<usize>,
    pub methods: Vec<GramMethod>,
    /// Timed runs per (method, size) after one discarded warm-up.
    pub repeats: usize,
    /// Assemble Gram matrices on all rayon threads instead of one.
    pub parallel: bool,
    pub quad: QuadConfig,
}

impl BenchConfig {
    pub fn new(family: Family, a: f64, b: f64, sizes: Vec<usize>, methods: Vec<GramMethod>) -> Self {
        BenchConfig {
            family,
            a,
            b,
            horizon: 10.0,
            sizes,
            methods,
            repeats: 5,
            parallel: false,
            quad: QuadConfig::default(),
        }
    }

    /// Methods by number 1–4.
    pub fn methods_from_numbers(numbers: &[u8]) -> Result<Vec<GramMethod>, BenchError> {
        numbers
            .iter()
            .map(|&k| {
                GramMethod::try_from(k).map_err(|_| BenchError::Unsupported(format!("method {k}; expected 1 to 4")))
            })
            .collect()
    }

    fn validate(&self) -> Result<(), BenchError> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(BenchError::InvalidConfig("sizes must be a non-empty list of positive counts".into()));
        }
        if self.methods.is_empty() {
            return Err(BenchError::InvalidConfig("no methods selected".into()));
        }
        if self.repeats == 0 {
            return Err(BenchError::InvalidConfig("repeats must be positive".into()));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(BenchError::InvalidConfig(format!("horizon {} must be positive", self.horizon)));
        }
        kernel_spec(self.family, self.a, self.b)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub method: GramMethod,
    pub n: usize,
    /// Median wall time of the timed runs.
    pub seconds: f64,
}

/// `seconds(numerator) / seconds(denominator)` at one size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Speedup {
    pub numerator: GramMethod,
    pub denominator: GramMethod,
    pub n: usize,
    pub ratio: f64,
}

/// Largest |entry difference| between two methods over all sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDiff {
    pub a: GramMethod,
    pub b: GramMethod,
    pub max_coord_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub timings: Vec<Timing>,
    pub speedups: Vec<Speedup>,
    pub diffs: Vec<PairDiff>,
    pub environment: String,
}

impl BenchReport {
    /// `method,n,seconds` rows.
    pub fn timing_csv(&self) -> String {
        let mut s = String::from("method,n,seconds\n");
        for t in &self.timings {
            let _ = writeln!(s, "{},{},{:.6e}", t.method.number(), t.n, t.seconds);
        }
        s
    }

    /// `pair_a,pair_b,max_coord_diff` rows.
    pub fn accuracy_csv(&self) -> String {
        let mut s = String::from("pair_a,pair_b,max_coord_diff\n");
        for d in &self.diffs {
            let _ = writeln!(s, "{},{},{:.6e}", d.a.number(), d.b.number(), d.max_coord_diff);
        }
        s
    }

    /// `method_num,method_den,n,ratio` rows.
    pub fn speedup_csv(&self) -> String {
        let mut s = String::from("method_num,method_den,n,ratio\n");
        for r in &self.speedups {
            let _ = writeln!(s, "{},{},{},{:.6}", r.numerator.number(), r.denominator.number(), r.n, r.ratio);
        }
        s
    }

    pub fn max_diff(&self) -> f64 {
        self.diffs.iter().map(|d| d.max_coord_diff).fold(0.0, f64::max)
    }
}

/// Host description embedded in every report.
pub fn environment_note(parallel: bool) -> String {
    let cpus = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let threads = if parallel { rayon::current_num_threads() } else { 1 };
    format!(
        "os={} arch={} cpus={cpus} threads={threads} build={}",
        std::env::consts::OS,
        std::env::consts::ARCH,
        if cfg!(debug_assertions) { "debug" } else { "release" }
    )
}

/// Time each method on each grid size and compare the matrices.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    config.validate()?;
    let spec = kernel_spec(config.family, config.a, config.b)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(if config.parallel { 0 } else { 1 })
        .build()
        .map_err(|e| BenchError::ThreadPool(e.to_string()))?;
    let mut timings = Vec::new();
    let mut speedups = Vec::new();
    let mut diffs: Vec<PairDiff> = Vec::new();
    for &n in &config.sizes {
        let grid = TimeGrid::uniform(config.horizon, n)?;
        let mut mats: Vec<(GramMethod, DMatrix<f64>)> = Vec::new();
        let mut secs = Vec::new();
        for &method in &config.methods {
            let run = || pool.install(|| gram(&spec, &grid, method, &config.quad));
            let mut g = run()?;
            let mut times = Vec::with_capacity(config.repeats);
            for _ in 0..config.repeats {
                let t = Instant::now();
                g = run()?;
                times.push(t.elapsed().as_secs_f64());
            }
            times.sort_by(f64::total_cmp);
            let seconds = median(&times);
            timings.push(Timing { method, n, seconds });
            secs.push((method, seconds));
            let jitter = g.jitter_applied();
            let mut m = g.into_entries();
            for i in 0..n {
                m[(i, i)] -= jitter;
            }
            mats.push((method, m));
        }
        for (i, &(ma, ta)) in secs.iter().enumerate() {
            for &(mb, tb) in &secs[i + 1..] {
                speedups.push(Speedup { numerator: ma, denominator: mb, n, ratio: ta / tb });
            }
        }
        for (i, (ma, a)) in mats.iter().enumerate() {
            for (mb, b) in &mats[i + 1..] {
                let d = (a - b).amax();
                match diffs.iter_mut().find(|p| p.a == *ma && p.b == *mb) {
                    Some(p) => p.max_coord_diff = p.max_coord_diff.max(d),
                    None => diffs.push(PairDiff { a: *ma, b: *mb, max_coord_diff: d }),
                }
            }
        }
    }
    Ok(BenchReport {
        config: config.clone(),
        timings,
        speedups,
        diffs,
        environment: environment_note(config.parallel),
    })
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}
