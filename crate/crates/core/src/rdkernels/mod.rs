//! Kernels on ℝᵈ built from a bounded set A and the distance
//! `A_x = inf{‖u − x‖ : u ∈ A}`:
//!
//! * `K_{H,A,f,±}(x,y) = ∫_{0 < A_u ≤ A_x∧A_y} f(u) Q_{H,±}(x−u, y−u) du` with
//!   `Q_{H,±}(x,y) = ‖x‖^{2H} + ‖y‖^{2H} − ‖x ± y‖^{2H}`;
//! * `C_{A,f}(x,y) = ∫_{0 < A_u ≤ A_x∧A_y} f(u) du`, combined with a
//!   stationary kernel K as the product `K(x,y)·C_{A,f}(x,y)`.
//!
//! A is a closed ball. For a ball centred at 0 the region is the spherical
//! shell `R < ‖u‖ ≤ R + A_x∧A_y`.

mod shell;
mod stationary;

pub use shell::{k_haf, k_haf_half_line, QSign};
pub use stationary::{stationary_eval, StationaryKernel};

use crate::quadrature::{integrate_1d, QuadConfig, QuadError};
use crate::specfun::{gamma, upper_inc_gamma, SpecFunError};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RdKernelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} not supported (need 1 <= d <= 3)")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetKind {
    Ball { center: Vec<f64>, radius: f64 },
}

/// The set A.
#[derive(Debug, Clone, PartialEq)]
pub struct SetGeometry {
    pub kind: SetKind,
}

impl SetGeometry {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self, RdKernelError> {
        if center.is_empty() {
            return Err(RdKernelError::InvalidParameter("ball needs dimension >= 1".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) || center.iter().any(|c| !c.is_finite()) {
            return Err(RdKernelError::InvalidParameter(format!(
                "ball needs a finite centre and radius > 0, got {radius}"
            )));
        }
        Ok(SetGeometry { kind: SetKind::Ball { center, radius } })
    }

    /// B(0,1) ⊂ ℝᵈ.
    pub fn unit_ball(d: usize) -> Result<Self, RdKernelError> {
        Self::ball(vec![0.0; d], 1.0)
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SetKind::Ball { center, .. } => center.len(),
        }
    }

    pub(crate) fn center(&self) -> &[f64] {
        match &self.kind {
            SetKind::Ball { center, .. } => center,
        }
    }

    pub(crate) fn radius(&self) -> f64 {
        match &self.kind {
            SetKind::Ball { radius, .. } => *radius,
        }
    }

    fn centered(&self) -> bool {
        self.center().iter().all(|&c| c == 0.0)
    }

    pub(crate) fn check(&self, x: &[f64]) -> Result<(), RdKernelError> {
        if x.len() != self.dim() {
            return Err(RdKernelError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(RdKernelError::InvalidParameter("point has non-finite coordinates".into()));
        }
        Ok(())
    }
}

/// Radial weights f(u) = g(‖u‖).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RdWeightFn {
    /// ‖u‖^a, a > −d.
    RadialPower(f64),
    /// e^{a‖u‖}.
    RadialExponential(f64),
}

impl RdWeightFn {
    pub fn validate(&self, d: usize) -> Result<(), RdKernelError> {
        match *self {
            RdWeightFn::RadialPower(a) if !(a > -(d as f64)) || !a.is_finite() => Err(
                RdKernelError::InvalidParameter(format!("radial power a = {a} must exceed −{d}")),
            ),
            RdWeightFn::RadialExponential(a) if !a.is_finite() => {
                Err(RdKernelError::InvalidParameter("exponential rate must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    /// g(r).
    #[inline]
    pub fn eval_radius(&self, r: f64) -> f64 {
        match *self {
            RdWeightFn::RadialPower(a) if a == 0.0 => 1.0,
            RdWeightFn::RadialPower(a) => r.powf(a),
            RdWeightFn::RadialExponential(a) => (a * r).exp(),
        }
    }

    pub(crate) fn eval(&self, u: &[f64]) -> f64 {
        self.eval_radius(norm(u))
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Surface area of the unit sphere in ℝᵈ, 2π^{d/2}/Γ(d/2).
pub(crate) fn sphere_area(d: usize) -> f64 {
    let h = 0.5 * d as f64;
    2.0 * PI.powf(h) / gamma(h)
}

/// A_x for a ball: max(‖x − c‖ − r, 0).
pub fn set_distance(a: &SetGeometry, x: &[f64]) -> Result<f64, RdKernelError> {
    a.check(x)?;
    Ok((dist(x, a.center()) - a.radius()).max(0.0))
}

/// `C_{A,f}(x,y)`: closed forms for a ball centred at 0, shell cubature
/// otherwise.
pub fn c_af(a: &SetGeometry, f: RdWeightFn, x: &[f64], y: &[f64]) -> Result<f64, RdKernelError> {
    let d = a.dim();
    f.validate(d)?;
    let reach = set_distance(a, x)?.min(set_distance(a, y)?);
    if reach <= 0.0 {
        return Ok(0.0);
    }
    let r0 = a.radius();
    let r1 = r0 + reach;
    if !a.centered() {
        return shell::shell_integral(a, f, reach, |_| 1.0, &[], &QuadConfig::with_tols(1e-13, 1e-11));
    }
    let omega = sphere_area(d);
    let dd = d as f64;
    let v = match f {
        RdWeightFn::RadialPower(p) => omega / (p + dd) * (r1.powf(p + dd) - r0.powf(p + dd)),
        RdWeightFn::RadialExponential(e) if e == 0.0 => omega / dd * (r1.powf(dd) - r0.powf(dd)),
        RdWeightFn::RadialExponential(e) if e < 0.0 => {
            omega / (-e).powf(dd) * (upper_inc_gamma(-e * r0, dd)? - upper_inc_gamma(-e * r1, dd)?)
        }
        RdWeightFn::RadialExponential(e) => {
            let cfg = QuadConfig::with_tols(1e-300, 1e-13);
            omega * integrate_1d(|r| (e * r).exp() * r.powi(d as i32 - 1), r0, r1, &cfg)?.value
        }
    };
    Ok(v)
}

/// `K(x,y)·C_{A,f}(x,y)`; zero whenever C vanishes.
pub fn mixed_cov(
    k: &StationaryKernel,
    a: &SetGeometry,
    f: RdWeightFn,
    x: &[f64],
    y: &[f64],
) -> Result<f64, RdKernelError> {
    let c = c_af(a, f, x, y)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    Ok(stationary_eval(k, x, y)? * c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances_to_unit_ball() {
        let a = SetGeometry::unit_ball(2).unwrap();
        assert_eq!(set_distance(&a, &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(set_distance(&a, &[2.0, 0.0]).unwrap(), 1.0);
        assert_eq!(set_distance(&a, &[3.0, 4.0]).unwrap(), 4.0);
        assert!(set_distance(&a, &[1.0]).is_err());
        assert!(SetGeometry::ball(vec![0.0], 0.0).is_err());
    }

    #[test]
    fn c_af_closed_forms() {
        let a = SetGeometry::unit_ball(2).unwrap();
        let v = c_af(&a, RdWeightFn::RadialPower(0.0), &[2.0, 0.0], &[0.0, 5.0]).unwrap();
        assert!((v - 3.0 * PI).abs() < 1e-13);
        assert_eq!(c_af(&a, RdWeightFn::RadialPower(0.5), &[0.5, 0.0], &[3.0, 3.0]).unwrap(), 0.0);
        assert!(c_af(&a, RdWeightFn::RadialPower(-2.0), &[2.0, 0.0], &[2.0, 0.0]).is_err());
        // 2π ∫₁² e^{−r} r dr = 2π(2e⁻¹ − 3e⁻²)
        let v = c_af(&a, RdWeightFn::RadialExponential(-1.0), &[0.0, 2.0], &[2.0, 2.0]).unwrap();
        let want = 2.0 * PI * (2.0 * (-1f64).exp() - 3.0 * (-2f64).exp());
        assert!((v - want).abs() < 1e-12);
        // 4π ∫₁² e^{r} r² dr = 4π[e^r(r² − 2r + 2)]₁²
        let a3 = SetGeometry::unit_ball(3).unwrap();
        let v = c_af(&a3, RdWeightFn::RadialExponential(1.0), &[2.0, 0.0, 0.0], &[0.0, 3.0, 0.0]).unwrap();
        let want = 4.0 * PI * (2.0 * 2f64.exp() - 1f64.exp());
        assert!((v / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn off_centre_ball_matches_shifted_constant_weight() {
        // f ≡ 1 is translation invariant, so the shell volume does not move
        let a = SetGeometry::ball(vec![0.5, -1.0], 0.7).unwrap();
        let f = RdWeightFn::RadialPower(0.0);
        let v = c_af(&a, f, &[3.0, 1.0], &[-2.0, 2.0]).unwrap();
        let reach = set_distance(&a, &[3.0, 1.0]).unwrap().min(set_distance(&a, &[-2.0, 2.0]).unwrap());
        let want = PI * ((0.7 + reach).powi(2) - 0.49);
        assert!((v / want - 1.0).abs() < 1e-9, "{v} vs {want}");
    }

    #[test]
    fn mixed_cov_zero_region() {
        let a = SetGeometry::unit_ball(2).unwrap();
        let k = StationaryKernel::Matern { kappa: 1.5, rho: 1.0 };
        let f = RdWeightFn::RadialPower(0.0);
        assert_eq!(mixed_cov(&k, &a, f, &[0.3, 0.3], &[0.3, 0.3]).unwrap(), 0.0);
        assert!(mixed_cov(&k, &a, f, &[2.0, 2.0], &[2.0, 1.5]).unwrap() > 0.0);
    }
}
