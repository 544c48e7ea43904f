//! Adaptive quadrature and cubature.
//!
//! * [`integrate_1d`]: globally adaptive 7-15 Gauss–Kronrod, optional Wynn
//!   epsilon extrapolation.
//! * [`integrate_2d`]: h-adaptive (Genz–Malik) or p-adaptive (tensor
//!   Clenshaw–Curtis) cubature, selected by [`QuadConfig::method_2d`].
//! * [`integrate_nd`]: the two cubature strategies for 1 ≤ d ≤ 3.
//!
//! Integrable power singularities at interval ends can be flagged with
//! [`EndpointSingularity`]; the interval is then remapped so the adaptive
//! rule sees a smooth(er) integrand.

mod cubature;
mod gk;
mod transform;
mod wynn;

pub use transform::{EndpointSingularity, Node};

use thiserror::Error;

/// Strategy used for multi-dimensional integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cubature {
    /// Region bisection driven by an embedded rule pair.
    HAdaptive,
    /// Single region, nested rules of increasing degree.
    PAdaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdiv: usize,
    pub wynn_epsilon: bool,
    pub method_2d: Cubature,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdiv: 200,
            wynn_epsilon: false,
            method_2d: Cubature::HAdaptive,
        }
    }
}

impl QuadConfig {
    pub fn with_tols(abs_tol: f64, rel_tol: f64) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(QuadError::InvalidConfig("tolerances must be > 0".into()));
        }
        if self.max_subdiv == 0 {
            return Err(QuadError::InvalidConfig("max_subdiv must be >= 1".into()));
        }
        Ok(())
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub subdivisions_used: usize,
}

impl std::ops::Add for QuadResult {
    type Output = QuadResult;
    fn add(self, o: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + o.value,
            err_estimate: self.err_estimate + o.err_estimate,
            subdivisions_used: self.subdivisions_used + o.subdivisions_used,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid integration domain: {0}")]
    InvalidDomain(String),
    #[error("integrand returned a non-finite value at {at:?}")]
    NanIntegrand { at: Vec<f64> },
    #[error("tolerance not reached: best estimate {} (error estimate {:e})", best.value, best.err_estimate)]
    ToleranceNotReached { best: QuadResult },
}

impl QuadError {
    /// Best available estimate when the failure was only a missed tolerance.
    pub fn best_estimate(&self) -> Option<QuadResult> {
        match self {
            QuadError::ToleranceNotReached { best } => Some(*best),
            _ => None,
        }
    }
}

/// Merge partial results, turning the combined error into a tolerance
/// failure when the pieces were accepted individually but the sum misses.
pub(crate) fn combine(
    parts: impl IntoIterator<Item = Result<QuadResult, QuadError>>,
) -> Result<QuadResult, QuadError> {
    let mut total = QuadResult {
        value: 0.0,
        err_estimate: 0.0,
        subdivisions_used: 0,
    };
    let mut missed = false;
    for p in parts {
        match p {
            Ok(r) => total = total + r,
            Err(QuadError::ToleranceNotReached { best }) => {
                missed = true;
                total = total + best;
            }
            Err(e) => return Err(e),
        }
    }
    if missed {
        Err(QuadError::ToleranceNotReached { best: total })
    } else {
        Ok(total)
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<(), QuadError> {
    if !(lo.is_finite() && hi.is_finite()) || !(lo < hi) {
        return Err(QuadError::InvalidDomain(format!("need finite lo < hi, got [{lo}, {hi}]")));
    }
    Ok(())
}

/// ∫_lo^hi f(u) du by adaptive 7-15 Gauss–Kronrod.
pub fn integrate_1d<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    integrate_1d_singular(f, lo, hi, EndpointSingularity::NONE, cfg)
}

/// As [`integrate_1d`], with power-type endpoint behaviour flagged.
pub fn integrate_1d_singular<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    sing: EndpointSingularity,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    integrate_1d_nodes(|n| f(n.u), lo, hi, sing, cfg)
}

/// As [`integrate_1d_singular`], with the integrand given each node's
/// distances to the interval ends.
pub fn integrate_1d_nodes<F: Fn(Node) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    sing: EndpointSingularity,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    cfg.validate()?;
    check_interval(lo, hi)?;
    combine(
        transform::try_pieces(lo, hi, sing)?
            .into_iter()
            .map(|p| gk::adaptive(|v| p.eval(v, &f), 0.0, 1.0, cfg)),
    )
}

/// One-dimensional integral with the cubature strategy `method`.
pub fn integrate_1d_cubature<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    sing: EndpointSingularity,
    method: Cubature,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    integrate_1d_cubature_nodes(|n| f(n.u), lo, hi, sing, method, cfg)
}

/// [`integrate_1d_cubature`] with node distances as in [`integrate_1d_nodes`].
pub fn integrate_1d_cubature_nodes<F: Fn(Node) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    sing: EndpointSingularity,
    method: Cubature,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    cfg.validate()?;
    check_interval(lo, hi)?;
    combine(transform::try_pieces(lo, hi, sing)?.into_iter().map(|p| {
        let g = |v: &[f64]| p.eval(v[0], &f);
        match method {
            Cubature::HAdaptive => cubature::h_adaptive(&g, 1, cfg),
            Cubature::PAdaptive => cubature::p_adaptive(&g, 1, cfg),
        }
    }))
}

/// ∫∫ over `[x0,x1]×[y0,y1]` with the strategy in `cfg.method_2d`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    rect: [(f64, f64); 2],
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    integrate_2d_singular(f, rect, [EndpointSingularity::NONE; 2], cfg)
}

pub fn integrate_2d_singular<F: Fn(f64, f64) -> f64>(
    f: F,
    rect: [(f64, f64); 2],
    sing: [EndpointSingularity; 2],
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    integrate_nd(|x: &[f64]| f(x[0], x[1]), &rect, &sing, cfg.method_2d, cfg)
}

/// Cubature over a box of dimension 1 to 3.
pub fn integrate_nd<F: Fn(&[f64]) -> f64>(
    f: F,
    bounds: &[(f64, f64)],
    sing: &[EndpointSingularity],
    method: Cubature,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    cfg.validate()?;
    let d = bounds.len();
    if !(1..=3).contains(&d) || sing.len() != d {
        return Err(QuadError::InvalidDomain(format!("dimension {d} not in 1..=3")));
    }
    for &(lo, hi) in bounds {
        check_interval(lo, hi)?;
    }
    let per_dim: Vec<Vec<transform::Piece>> = bounds
        .iter()
        .zip(sing)
        .map(|(&(lo, hi), &s)| transform::try_pieces(lo, hi, s))
        .collect::<Result<_, _>>()?;
    // every combination of per-dimension pieces is integrated over [0,1]^d
    let mut combos: Vec<Vec<transform::Piece>> = vec![Vec::new()];
    for pieces in &per_dim {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                pieces.iter().map(move |p| {
                    let mut c = c.clone();
                    c.push(*p);
                    c
                })
            })
            .collect();
    }
    combine(combos.into_iter().map(|combo| {
        let g = |v: &[f64]| -> f64 {
            let mut u = [0.0; 3];
            let mut jac = 1.0;
            for (k, p) in combo.iter().enumerate() {
                let (x, j) = p.map(v[k]);
                if j == 0.0 {
                    return 0.0;
                }
                u[k] = x;
                jac *= j;
            }
            jac * f(&u[..d])
        };
        match method {
            Cubature::HAdaptive => cubature::h_adaptive(&g, d, cfg),
            Cubature::PAdaptive => cubature::p_adaptive(&g, d, cfg),
        }
    }))
}
