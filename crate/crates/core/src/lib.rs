//! Weighted sub-fractional Brownian motion.
//!
//! Covariance kernels (quadrature and closed forms), Gaussian simulation of
//! the base, Ornstein–Uhlenbeck and geometric processes, d-dimensional
//! kernels, maximum-likelihood inference and a Gram benchmark harness.

pub mod specfun;
pub mod kernels;
pub mod quadrature;
pub mod processes;
pub mod rdkernels;
pub mod inference;
pub mod bench;
