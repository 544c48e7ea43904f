//! Observations, kernel families and the Gaussian log-likelihood.

use super::InferenceError;
use crate::kernels::{
    gram, kernel_eval_closed, kernel_eval_quad, GramMatrix, GramMethod, KernelError, KernelSpec,
    QuadMethod, TimeGrid, WeightFn,
};
use crate::processes::PathSample;
use crate::quadrature::QuadConfig;
use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

/// Observed values on a grid; `observations[0]` is the value at t₀ = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    grid: TimeGrid,
    observations: Vec<f64>,
}

impl Dataset {
    /// The process starts at 0, so the t₀ observation must be 0.
    pub fn new(grid: TimeGrid, observations: Vec<f64>) -> Result<Self, InferenceError> {
        if observations.len() != grid.points().len() {
            return Err(InferenceError::InvalidInput(format!(
                "{} observations for {} grid points",
                observations.len(),
                grid.points().len()
            )));
        }
        if observations.iter().any(|v| !v.is_finite()) {
            return Err(InferenceError::InvalidInput("non-finite observation".into()));
        }
        if observations[0] != 0.0 {
            return Err(InferenceError::InvalidInput(format!(
                "observation at t0 = 0 must be 0, got {}",
                observations[0]
            )));
        }
        Ok(Dataset { grid, observations })
    }

    pub fn from_path(path: &PathSample) -> Result<Self, InferenceError> {
        Self::new((*path.grid).clone(), path.values.clone())
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// All observations including the pinned t₀ value.
    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    /// Observations at t₁, …, tₙ.
    pub fn positive(&self) -> &[f64] {
        &self.observations[1..]
    }

    /// Number of observations entering the likelihood.
    pub fn len(&self) -> usize {
        self.observations.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The first `n` positive-time observations, plus the rest as (t, value) pairs.
    pub fn split(&self, n: usize) -> Result<(Dataset, Vec<(f64, f64)>), InferenceError> {
        if n == 0 || n > self.len() {
            return Err(InferenceError::InvalidInput(format!(
                "split at {n} outside 1..={}",
                self.len()
            )));
        }
        let grid = TimeGrid::new(self.grid.points()[..=n].to_vec())?;
        let head = Dataset::new(grid, self.observations[..=n].to_vec())?;
        let tail = self.grid.points()[n + 1..]
            .iter()
            .copied()
            .zip(self.observations[n + 1..].iter().copied())
            .collect();
        Ok((head, tail))
    }
}

/// Weight family of the fitted kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// f(u) = u^a, a > −1.
    C1,
    /// f(u) = e^{au}.
    C2,
}

impl Family {
    pub fn weight(self, a: f64) -> WeightFn {
        match self {
            Family::C1 => WeightFn::PowerLaw(a),
            Family::C2 => WeightFn::Exponential(a),
        }
    }

    /// Default search rectangle for a.
    pub fn default_a_range(self) -> (f64, f64) {
        match self {
            Family::C1 => (-0.9, 2.1),
            Family::C2 => (-2.0, 2.0),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::C1 => "c1",
            Family::C2 => "c2",
        })
    }
}

impl FromStr for Family {
    type Err = InferenceError;
    fn from_str(s: &str) -> Result<Self, InferenceError> {
        match s.to_ascii_lowercase().as_str() {
            "c1" | "power" => Ok(Family::C1),
            "c2" | "exp" | "exponential" => Ok(Family::C2),
            _ => Err(InferenceError::InvalidInput(format!("unknown family {s:?}"))),
        }
    }
}

/// Kernel for (family, a, b); b = 1 selects the log-kernel.
pub fn kernel_spec(family: Family, a: f64, b: f64) -> Result<KernelSpec, InferenceError> {
    if !(0.0..=2.0).contains(&b) {
        return Err(InferenceError::InvalidInput(format!("b = {b} outside [0, 2]")));
    }
    let w = family.weight(a);
    Ok(if b == 1.0 { KernelSpec::log_kernel(w)? } else { KernelSpec::weighted(w, b)? })
}

/// Gram matrix by closed form, or adaptive Gauss–Kronrod where none exists.
pub(crate) fn model_gram(
    spec: &KernelSpec,
    grid: &TimeGrid,
    cfg: &QuadConfig,
) -> Result<GramMatrix, KernelError> {
    match gram(spec, grid, GramMethod::ClosedForm, cfg) {
        Err(KernelError::Unsupported(_)) => gram(spec, grid, GramMethod::GaussKronrod, cfg),
        r => r,
    }
}

/// Single kernel value with the same method preference as [`model_gram`].
pub(crate) fn model_kernel(
    spec: &KernelSpec,
    s: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<f64, KernelError> {
    match kernel_eval_closed(spec, s, t) {
        Err(KernelError::Unsupported(_)) => {
            kernel_eval_quad(spec, s, t, cfg, QuadMethod::GaussKronrod)
        }
        r => r,
    }
}

/// Lower Cholesky factor and log-determinant of a model Gram matrix.
#[derive(Debug)]
pub(crate) struct Factor {
    l: DMatrix<f64>,
    ln_det: f64,
}

impl Factor {
    fn from_gram(g: &GramMatrix) -> Self {
        Factor { l: g.cholesky().l(), ln_det: g.ln_det() }
    }

    fn loglik(&self, x: &[f64]) -> Result<f64, InferenceError> {
        let y = self
            .l
            .solve_lower_triangular(&DVector::from_column_slice(x))
            .ok_or_else(|| InferenceError::Singular("zero pivot in Cholesky factor".into()))?;
        let n = x.len() as f64;
        Ok(-0.5 * (n * (2.0 * PI).ln() + self.ln_det + y.norm_squared()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct CacheKey {
    family: Family,
    a: u64,
    b: u64,
    grid: u64,
}

/// Cholesky factors keyed by (family, a, b, grid fingerprint).
///
/// Entries are kept until the capacity is reached; later factors are
/// computed but not stored, so the first points evaluated (a grid search)
/// stay resident.
#[derive(Debug)]
pub struct GramCache {
    capacity: usize,
    map: Mutex<HashMap<CacheKey, Arc<Factor>>>,
}

impl Default for GramCache {
    fn default() -> Self {
        Self::with_capacity(512)
    }
}

impl GramCache {
    pub fn with_capacity(capacity: usize) -> Self {
        GramCache { capacity, map: Mutex::new(HashMap::new()) }
    }

    pub fn len(&self) -> usize {
        self.map.lock().map(|m| m.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn factor(
        &self,
        family: Family,
        a: f64,
        b: f64,
        grid: &TimeGrid,
        cfg: &QuadConfig,
    ) -> Result<Arc<Factor>, InferenceError> {
        let key = CacheKey { family, a: a.to_bits(), b: b.to_bits(), grid: grid.fingerprint() };
        if let Some(f) = self.map.lock().ok().and_then(|m| m.get(&key).cloned()) {
            return Ok(f);
        }
        let spec = kernel_spec(family, a, b)?;
        let f = Arc::new(Factor::from_gram(&model_gram(&spec, grid, cfg)?));
        if let Ok(mut m) = self.map.lock() {
            if m.len() < self.capacity {
                m.insert(key, Arc::clone(&f));
            }
        }
        Ok(f)
    }
}

/// Zero-mean Gaussian log-density of `x` under covariance `cov`.
pub fn gaussian_loglik(cov: &DMatrix<f64>, x: &[f64]) -> Result<f64, InferenceError> {
    if cov.nrows() != x.len() || cov.ncols() != x.len() {
        return Err(InferenceError::InvalidInput("covariance and data sizes differ".into()));
    }
    let g = GramMatrix::validated(cov.clone(), GramMethod::ClosedForm, 0)?;
    Factor::from_gram(&g).loglik(x)
}

/// Log-likelihood of the observations after t₀ under the Gram of (family, a, b).
pub fn loglik(
    data: &Dataset,
    family: Family,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<f64, InferenceError> {
    let spec = kernel_spec(family, a, b)?;
    Factor::from_gram(&model_gram(&spec, data.grid(), cfg)?).loglik(data.positive())
}

/// [`loglik`] reusing factors from `cache`.
pub fn loglik_cached(
    data: &Dataset,
    family: Family,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
    cache: &GramCache,
) -> Result<f64, InferenceError> {
    cache.factor(family, a, b, data.grid(), cfg)?.loglik(data.positive())
}
