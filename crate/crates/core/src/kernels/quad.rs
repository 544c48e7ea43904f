//! Kernels by numerical integration of their defining integrals (methods 1–3).

use super::{check_times, xlogx, KernelError, KernelSpec, Shape};
use crate::quadrature::{
    integrate_1d_cubature_nodes, integrate_1d_nodes, Cubature, EndpointSingularity, Node,
    QuadConfig, QuadResult,
};

/// Quadrature strategy for a kernel entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadMethod {
    /// Method 1: adaptive Gauss–Kronrod with Wynn epsilon extrapolation.
    GaussKronrod,
    /// Method 2: h-adaptive cubature.
    HAdaptive,
    /// Method 3: p-adaptive cubature.
    PAdaptive,
}

impl TryFrom<u8> for QuadMethod {
    type Error = KernelError;
    fn try_from(v: u8) -> Result<Self, KernelError> {
        match v {
            1 => Ok(QuadMethod::GaussKronrod),
            2 => Ok(QuadMethod::HAdaptive),
            3 => Ok(QuadMethod::PAdaptive),
            _ => Err(KernelError::InvalidParameter(format!("quadrature method {v} not in 1..=3"))),
        }
    }
}

/// Integrate `g` over [lo, hi] with the chosen method.
pub(crate) fn integrate<F: Fn(Node) -> f64>(
    g: F,
    lo: f64,
    hi: f64,
    sing: EndpointSingularity,
    method: QuadMethod,
    cfg: &QuadConfig,
) -> Result<QuadResult, KernelError> {
    let r = match method {
        QuadMethod::GaussKronrod => {
            let cfg = QuadConfig { wynn_epsilon: true, ..*cfg };
            integrate_1d_nodes(g, lo, hi, sing, &cfg)
        }
        QuadMethod::HAdaptive => integrate_1d_cubature_nodes(g, lo, hi, sing, Cubature::HAdaptive, cfg),
        QuadMethod::PAdaptive => integrate_1d_cubature_nodes(g, lo, hi, sing, Cubature::PAdaptive, cfg),
    };
    Ok(r?)
}

/// Exponent flag for a power of the distance to the upper limit.
fn hi_flag(alpha: f64) -> Option<f64> {
    if alpha == alpha.floor() {
        None
    } else {
        Some(alpha)
    }
}

/// R_{f,b}(s,t) or K_f(s,t) by quadrature.
///
/// A missed tolerance is returned as an error that carries the best estimate.
pub fn kernel_eval_quad(
    spec: &KernelSpec,
    s: f64,
    t: f64,
    cfg: &QuadConfig,
    method: QuadMethod,
) -> Result<f64, KernelError> {
    spec.validate()?;
    let (m, big) = check_times(s, t)?;
    if m == 0.0 {
        return Ok(0.0);
    }
    let (scale, w) = spec.weight.normalized();
    let lo = w.origin_exponent();
    let gap = big - m;
    // x = s∧t − u is exact next to the upper end
    let v = match spec.effective_shape() {
        Shape::Weighted(b) if b == 0.0 => {
            integrate(|n: Node| w.eval(n.u), 0.0, m, EndpointSingularity::new(lo, None), method, cfg)?.value
        }
        Shape::Weighted(b) => {
            let g = |n: Node| {
                let x = n.to_hi;
                w.eval(n.u) * (x.powf(b) + (gap + x).powf(b) - (gap + 2.0 * x).powf(b))
            };
            let sing = EndpointSingularity::new(lo, hi_flag(b));
            integrate(g, 0.0, m, sing, method, cfg)?.value / (1.0 - b)
        }
        Shape::LogKernel => {
            let g = |n: Node| {
                let x = n.to_hi;
                w.eval(n.u) * (xlogx(gap + 2.0 * x) - xlogx(x) - xlogx(gap + x))
            };
            // x ln x at the upper end: graded like a fractional power
            let sing = EndpointSingularity::new(lo, Some(0.5));
            integrate(g, 0.0, m, sing, method, cfg)?.value
        }
    };
    Ok(scale * v)
}

/// C_{f,b}(s,t) = ∫₀^{s∧t} f(u)(s+t−2u)^{b−2} du by quadrature, b ∈ (1, 2].
pub fn nu_cov(spec: &KernelSpec, s: f64, t: f64, cfg: &QuadConfig) -> Result<f64, KernelError> {
    nu_cov_with(spec, s, t, cfg, QuadMethod::GaussKronrod)
}

pub(crate) fn nu_cov_with(
    spec: &KernelSpec,
    s: f64,
    t: f64,
    cfg: &QuadConfig,
    method: QuadMethod,
) -> Result<f64, KernelError> {
    spec.validate()?;
    let b = match spec.shape {
        Shape::Weighted(b) if b > 1.0 => b,
        _ => return Err(KernelError::Hypothesis("C_{f,b} needs b in (1, 2]".into())),
    };
    let (m, big) = check_times(s, t)?;
    if m == 0.0 {
        return Ok(0.0);
    }
    let (scale, w) = spec.weight.normalized();
    let g = |n: Node| w.eval(n.u) * (big - m + 2.0 * n.to_hi).powf(b - 2.0);
    // only the diagonal is singular; remapping a regular end would create one
    let hi = if big == m { hi_flag(b - 2.0) } else { None };
    let sing = EndpointSingularity::new(w.origin_exponent(), hi);
    Ok(scale * integrate(g, 0.0, m, sing, method, cfg)?.value)
}
