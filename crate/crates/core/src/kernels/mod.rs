//! Covariance kernels on ℝ₊².
//!
//! * `R_{f,b}(s,t) = (1−b)⁻¹ ∫₀^{s∧t} f(u)[(s−u)^b + (t−u)^b − (s+t−2u)^b] du`
//! * `K_f(s,t) = ∫₀^{s∧t} f(u)[ψ(s+t−2u) − ψ(s−u) − ψ(t−u)] du`, ψ(x) = x ln x
//! * `C_{f,b}(s,t) = ∫₀^{s∧t} f(u)(s+t−2u)^{b−2} du` (b > 1)
//!
//! Each is available by quadrature ([`kernel_eval_quad`], methods 1–3) and in
//! closed form ([`kernel_eval_closed`], method 4).

mod closed;
mod gram;
mod limits;
mod quad;
mod weight;

pub use closed::{kernel_eval_closed, nu_cov_closed};
pub use gram::{gram, gram_with, GramMatrix, GramMethod, TimeGrid};
pub use limits::{
    continuity_gap, increment_decomposition, increment_variance, memory_limit_target,
    memory_limits, representation_integral, MemoryProbe,
};
pub use quad::{kernel_eval_quad, nu_cov, QuadMethod};
pub use weight::WeightFn;

use crate::quadrature::QuadError;
use crate::specfun::SpecFunError;
use thiserror::Error;

/// Below this distance from 1 the weighted kernel is replaced by its b → 1
/// limit, the log-kernel; the (1−b)⁻¹ factor would otherwise amplify rounding.
pub(crate) const LOG_SWITCH: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no closed form for {0}")]
    Unsupported(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("matrix not positive definite after jitter {jitter:e} (trace {trace:e})")]
    NotPositiveDefinite { jitter: f64, trace: f64 },
}

/// Which kernel a [`KernelSpec`] selects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `R_{f,b}` with b ∈ [0,1) ∪ (1,2].
    Weighted(f64),
    /// `K_f`, the b = 1 limit.
    LogKernel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub weight: WeightFn,
    pub shape: Shape,
}

impl KernelSpec {
    pub fn new(weight: WeightFn, shape: Shape) -> Result<Self, KernelError> {
        let spec = KernelSpec { weight, shape };
        spec.validate()?;
        Ok(spec)
    }

    pub fn weighted(weight: WeightFn, b: f64) -> Result<Self, KernelError> {
        Self::new(weight, Shape::Weighted(b))
    }

    pub fn log_kernel(weight: WeightFn) -> Result<Self, KernelError> {
        Self::new(weight, Shape::LogKernel)
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        self.weight.validate()?;
        if let Shape::Weighted(b) = self.shape {
            if !((0.0..1.0).contains(&b) || (b > 1.0 && b <= 2.0)) {
                return Err(KernelError::InvalidParameter(format!(
                    "b = {b} not in [0,1) ∪ (1,2]"
                )));
            }
        }
        Ok(())
    }

    /// The exponent b, with 1 for the log-kernel.
    pub fn b(&self) -> f64 {
        match self.shape {
            Shape::Weighted(b) => b,
            Shape::LogKernel => 1.0,
        }
    }

    /// Shape actually evaluated: b within [`LOG_SWITCH`] of 1 uses the log-kernel.
    pub(crate) fn effective_shape(&self) -> Shape {
        match self.shape {
            Shape::Weighted(b) if (b - 1.0).abs() < LOG_SWITCH => Shape::LogKernel,
            s => s,
        }
    }
}

/// `Q_b(s,t) = (s^b + t^b − (s+t)^b)/(1−b)`; at b = 1 the limit
/// `ψ(s+t) − ψ(s) − ψ(t)` is returned.
pub fn q_kernel(b: f64, s: f64, t: f64) -> Result<f64, KernelError> {
    if !(s >= 0.0 && t >= 0.0) {
        return Err(KernelError::InvalidParameter(format!("need s,t >= 0, got ({s}, {t})")));
    }
    if (b - 1.0).abs() < LOG_SWITCH {
        return Ok(xlogx(s + t) - xlogx(s) - xlogx(t));
    }
    Ok((s.powf(b) + t.powf(b) - (s + t).powf(b)) / (1.0 - b))
}

/// x ln x with the continuous extension 0 at x = 0.
#[inline]
pub(crate) fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// (y + d)^b − y^b without cancellation for d ≪ y.
#[inline]
pub(crate) fn pow_diff(y: f64, d: f64, b: f64) -> f64 {
    if y <= 0.0 {
        return d.powf(b);
    }
    y.powf(b) * (b * (d / y).ln_1p()).exp_m1()
}

pub(crate) fn check_times(s: f64, t: f64) -> Result<(f64, f64), KernelError> {
    if !(s >= 0.0 && t >= 0.0 && s.is_finite() && t.is_finite()) {
        return Err(KernelError::InvalidParameter(format!(
            "need finite s,t >= 0, got ({s}, {t})"
        )));
    }
    Ok((s.min(t), s.max(t)))
}
