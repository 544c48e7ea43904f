//! Maximum-likelihood inference for the weight families
//! 𝒞₁ = {u^a : a > −1} and 𝒞₂ = {e^{au}}, with b ∈ [0, 2] and the
//! log-kernel at b = 1.
//!
//! Fitting runs a coarse grid search over a rectangle of (a, b), refines the
//! best cell with Nelder–Mead and derives profile-deviance intervals
//! calibrated by χ²₁. Prediction conditions the Gaussian law on the observed
//! path.

mod fit;
mod likelihood;
mod optim;
mod predict;

pub use fit::{
    aic, fit_mle, fit_mle_with, profile_ci, profile_ci_with, FitOptions, FitResult, Interval, Param,
    ProfileCi, MIN_OBSERVATIONS,
};
pub use likelihood::{gaussian_loglik, kernel_spec, loglik, loglik_cached, Dataset, Family, GramCache};
pub use optim::chi2_quantile;
pub use predict::{extend_grid, mse, predict, predict_with, Prediction, BAND};

use crate::kernels::KernelError;
use crate::processes::ProcessError;
use crate::specfun::SpecFunError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular covariance: {0}")]
    Singular(String),
    #[error("fit did not converge: {0}")]
    NotConverged(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}
