//! Path simulation: the base process ζ, the Ornstein–Uhlenbeck process V
//! driven by ζ, and the geometric process S = S₀·exp(X).
//!
//! All paths are Gaussian vectors drawn from a factorized covariance. Each
//! path uses its own ChaCha20 stream (`stream = path_id`) of the generator
//! seeded with `seed`, so any path can be reproduced in isolation.

mod drift;
mod geometric;
mod ou;
mod sample;

pub use drift::ou_drift_estimators;
pub use geometric::{geometric_sample, log_mean, GeomSpec};
pub use ou::{ou_gram, ou_sample, OUSpec};
pub use sample::{factorize, sample_paths, sample_with_factor, PathSample};

use crate::kernels::KernelError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProcessError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate path: {0}")]
    DegeneratePath(String),
    #[error("covariance factorization failed: {0}")]
    Factorization(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
