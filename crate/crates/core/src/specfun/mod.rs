//! Special functions used by the closed-form kernel evaluations.
//!
//! Argument order follows the kernel formulas: the evaluation point comes
//! first, the shape parameters after it (`inc_beta(x, a, b)`,
//! `upper_inc_gamma(x, b)`, `hyp1f1(x, a, b)`, ...).
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod beta;
mod expint;
mod gamma;
mod hyper;

pub use bessel::bessel_k;
pub use beta::{beta, inc_beta, inc_beta_parts, ln_beta};
pub use expint::{exp_integral_e1, exp_integral_ei};
pub use gamma::{
    digamma, gamma, ln_gamma, lower_inc_gamma, regularized_gamma_p, rgamma, upper_inc_gamma,
};
pub use hyper::{hyp1f1, hyp1f1_with, hyp2f1, hyp2f1_with};

use thiserror::Error;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{func}: argument outside domain ({detail})")]
    Domain { func: &'static str, detail: String },
    #[error("{func}: no convergence within {terms} terms")]
    NonConvergence { func: &'static str, terms: usize },
    #[error("{func}: result overflows f64")]
    Overflow { func: &'static str },
}

impl SpecFunError {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        SpecFunError::Domain {
            func,
            detail: detail.into(),
        }
    }
}

/// Series truncation controls shared by the iterative evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunConfig {
    /// Relative size of the last retained term.
    pub series_tol: f64,
    pub max_terms: usize,
}

impl Default for SpecFunConfig {
    fn default() -> Self {
        SpecFunConfig {
            series_tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

impl SpecFunConfig {
    pub fn validate(&self) -> Result<(), SpecFunError> {
        if !(self.series_tol > 0.0) {
            return Err(SpecFunError::domain("SpecFunConfig", "series_tol must be > 0"));
        }
        if self.max_terms == 0 {
            return Err(SpecFunError::domain("SpecFunConfig", "max_terms must be >= 1"));
        }
        Ok(())
    }
}

/// Tolerance used by the internal continued fractions and series, well
/// below `SpecFunConfig::series_tol` so that the closed forms keep close
/// to full double precision.
pub(crate) const EPS: f64 = 1e-16;
pub(crate) const FPMIN: f64 = 1e-300;
pub(crate) const MAX_ITER: usize = 10_000;
