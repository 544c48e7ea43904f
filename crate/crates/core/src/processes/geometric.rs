//! Geometric process S_t = S₀·exp(X_t).
//!
//! X_t = μt + σζ_t, and for b = 0 the Itô correction −(σ²/2)∫₀ᵗ f(u) du is
//! added to the drift.

use super::sample::sample_paths;
use super::{PathSample, ProcessError};
use crate::kernels::{gram, GramMethod, KernelSpec, Shape, TimeGrid};
use crate::quadrature::QuadConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeomSpec {
    pub kernel: KernelSpec,
    /// Percentage drift (1/time).
    pub mu: f64,
    /// Percentage volatility.
    pub sigma: f64,
    pub s0: f64,
}

impl GeomSpec {
    pub fn new(kernel: KernelSpec, mu: f64, sigma: f64, s0: f64) -> Result<Self, ProcessError> {
        let spec = GeomSpec { kernel, mu, sigma, s0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ProcessError> {
        self.kernel.validate()?;
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(ProcessError::InvalidParameter(format!("sigma = {} must be > 0", self.sigma)));
        }
        if !(self.s0 > 0.0 && self.s0.is_finite()) {
            return Err(ProcessError::InvalidParameter(format!("s0 = {} must be > 0", self.s0)));
        }
        if !self.mu.is_finite() {
            return Err(ProcessError::InvalidParameter("mu must be finite".into()));
        }
        Ok(())
    }
}

/// E[X_t] for the log-process X_t = ln(S_t/S₀).
pub fn log_mean(spec: &GeomSpec, t: f64) -> f64 {
    match spec.kernel.shape {
        Shape::Weighted(b) if b == 0.0 => {
            spec.mu * t - 0.5 * spec.sigma * spec.sigma * spec.kernel.weight.mass(t)
        }
        _ => spec.mu * t,
    }
}

/// Paths of S on the grid; `values[0] = s0`.
pub fn geometric_sample(
    spec: &GeomSpec,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
    cfg: &QuadConfig,
) -> Result<Vec<PathSample>, ProcessError> {
    spec.validate()?;
    let g = gram(&spec.kernel, grid, GramMethod::ClosedForm, cfg)?;
    Ok(sample_paths(&g, grid, n_paths, seed)?
        .into_iter()
        .map(|p| p.map_values(|t, z| spec.s0 * (log_mean(spec, t) + spec.sigma * z).exp()))
        .collect())
}
