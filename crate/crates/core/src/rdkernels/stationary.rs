//! Stationary kernels k(‖x − y‖).

use super::{dist, RdKernelError};
use crate::specfun::{bessel_k, gamma};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StationaryKernel {
    /// Matérn with shape κ and scale ρ, normalized as
    /// `Γ(κ+1)^{1/2} κ^{(κ+1)/4} r^{(κ−1)/2} / (π^{1/2} Γ((κ+1)/2) Γ(κ)^{1/2} (2κ^{1/2}ρ)^{(κ+1)/2}) · 𝒦_κ(r/ρ)`.
    /// The factor r^{(κ−1)/2} does not cancel the r^{−κ} growth of 𝒦_κ, so
    /// the value at r = 0 is +∞.
    Matern { kappa: f64, rho: f64 },
    /// `σ² exp(−r²β²/2)`.
    DoubleExp { sigma: f64, beta: f64 },
    /// `σ² (1 + r²/(2κρ²))^{−κ}`.
    RationalQuadratic { sigma: f64, rho: f64, kappa: f64 },
    /// `σ² exp(−2 sin²(πr/ρ)/β²)`.
    Periodic { sigma: f64, rho: f64, beta: f64 },
}

impl StationaryKernel {
    pub fn validate(&self) -> Result<(), RdKernelError> {
        let params: &[f64] = match self {
            StationaryKernel::Matern { kappa, rho } => &[*kappa, *rho],
            StationaryKernel::DoubleExp { sigma, beta } => &[*sigma, *beta],
            StationaryKernel::RationalQuadratic { sigma, rho, kappa } => &[*sigma, *rho, *kappa],
            StationaryKernel::Periodic { sigma, rho, beta } => &[*sigma, *rho, *beta],
        };
        if params.iter().all(|p| *p > 0.0 && p.is_finite()) {
            Ok(())
        } else {
            Err(RdKernelError::InvalidParameter(format!("{self:?}: parameters must be > 0")))
        }
    }

    /// Value at distance r ≥ 0.
    pub fn at_distance(&self, r: f64) -> Result<f64, RdKernelError> {
        self.validate()?;
        Ok(match *self {
            StationaryKernel::Matern { kappa, rho } => {
                if r == 0.0 {
                    return Ok(f64::INFINITY);
                }
                let num = gamma(kappa + 1.0).sqrt() * kappa.powf(0.25 * (kappa + 1.0));
                let den = PI.sqrt()
                    * gamma(0.5 * (kappa + 1.0))
                    * gamma(kappa).sqrt()
                    * (2.0 * kappa.sqrt() * rho).powf(0.5 * (kappa + 1.0));
                num / den * r.powf(0.5 * (kappa - 1.0)) * bessel_k(kappa, r / rho)?
            }
            StationaryKernel::DoubleExp { sigma, beta } => sigma * sigma * (-0.5 * r * r * beta * beta).exp(),
            StationaryKernel::RationalQuadratic { sigma, rho, kappa } => {
                sigma * sigma * (1.0 + r * r / (2.0 * kappa * rho * rho)).powf(-kappa)
            }
            StationaryKernel::Periodic { sigma, rho, beta } => {
                let s = (PI * r / rho).sin();
                sigma * sigma * (-2.0 * s * s / (beta * beta)).exp()
            }
        })
    }
}

/// k(x, y) for points of equal dimension.
pub fn stationary_eval(k: &StationaryKernel, x: &[f64], y: &[f64]) -> Result<f64, RdKernelError> {
    if x.len() != y.len() {
        return Err(RdKernelError::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(RdKernelError::InvalidParameter("point has non-finite coordinates".into()));
    }
    k.at_distance(dist(x, y))
}
