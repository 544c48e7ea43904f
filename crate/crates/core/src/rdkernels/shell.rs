//! Integrals over the shell `{u : 0 < A_u ≤ ρ}` around a ball, in polar
//! (d = 2) or spherical (d = 3) coordinates about the ball's centre.
//!
//! The radius is integrated adaptively. Directions use fixed Gauss–Legendre
//! rules, with panel breaks (d = 2) or the pole (d = 3) placed at the
//! directions where the integrand has a kink. Panels are graded towards
//! their ends by θ = L(3s² − 2s³) so kinks there cost little accuracy.

use super::{dist, norm, set_distance, RdKernelError, RdWeightFn, SetGeometry};
use crate::quadrature::{
    combine, integrate_1d, integrate_1d_singular, EndpointSingularity, QuadConfig,
};
use std::f64::consts::PI;

/// Which of `Q_{H,±}` is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QSign {
    /// `‖x‖^{2H} + ‖y‖^{2H} − ‖x + y‖^{2H}`.
    Plus,
    /// `‖x‖^{2H} + ‖y‖^{2H} − ‖x − y‖^{2H}`.
    Minus,
}

const PANEL_NODES_2D: usize = 48;
const POLAR_NODES_3D: usize = 48;
const AZIMUTH_NODES_3D: usize = 64;

/// Gauss–Legendre nodes and weights on [−1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Nodes and weights on [0, 1] for ∫₀¹ g(θ) dθ, graded at both ends by
/// θ = 3s² − 2s³.
fn graded_panel(n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    x.iter()
        .zip(&w)
        .map(|(x, w)| {
            let s = 0.5 * (1.0 + x);
            (s * s * (3.0 - 2.0 * s), 0.5 * w * 6.0 * s * (1.0 - s))
        })
        .collect()
}

/// Unit directions and weights summing to the sphere area.
fn angular_rule(d: usize, kinks: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    match d {
        1 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        2 => {
            let mut cuts: Vec<f64> = kinks
                .iter()
                .filter(|k| norm(k) > 0.0)
                .map(|k| k[1].atan2(k[0]).rem_euclid(2.0 * PI))
                .collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            if cuts.is_empty() {
                cuts.push(0.0);
            }
            let panel = graded_panel(PANEL_NODES_2D);
            let mut rule = Vec::new();
            for (i, &lo) in cuts.iter().enumerate() {
                let hi = if i + 1 < cuts.len() { cuts[i + 1] } else { cuts[0] + 2.0 * PI };
                for &(g, w) in &panel {
                    let th = lo + (hi - lo) * g;
                    rule.push((vec![th.cos(), th.sin()], (hi - lo) * w));
                }
            }
            rule
        }
        _ => {
            // pole along the first kink direction
            let axis = kinks
                .iter()
                .find(|k| norm(k) > 0.0)
                .map(|k| k.iter().map(|v| v / norm(k)).collect::<Vec<_>>())
                .unwrap_or_else(|| vec![0.0, 0.0, 1.0]);
            let (e1, e2) = orthonormal_pair(&axis);
            let dphi = 2.0 * PI / AZIMUTH_NODES_3D as f64;
            let mut rule = Vec::with_capacity(POLAR_NODES_3D * AZIMUTH_NODES_3D);
            for (g, gw) in graded_panel(POLAR_NODES_3D) {
                // polar angle from the axis, surface element sin φ dφ dψ
                let (st, ct) = (PI * g).sin_cos();
                let w = PI * gw * st;
                for j in 0..AZIMUTH_NODES_3D {
                    let ph = (j as f64 + 0.5) * dphi;
                    let (c, s) = (st * ph.cos(), st * ph.sin());
                    let dir = (0..3).map(|i| c * e1[i] + s * e2[i] + ct * axis[i]).collect();
                    rule.push((dir, w * dphi));
                }
            }
            rule
        }
    }
}

fn orthonormal_pair(a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pick = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot: f64 = (0..3).map(|i| pick[i] * a[i]).sum();
    let mut e1: Vec<f64> = (0..3).map(|i| pick[i] - dot * a[i]).collect();
    let n1 = norm(&e1);
    e1.iter_mut().for_each(|v| *v /= n1);
    let e2 = vec![
        a[1] * e1[2] - a[2] * e1[1],
        a[2] * e1[0] - a[0] * e1[2],
        a[0] * e1[1] - a[1] * e1[0],
    ];
    (e1, e2)
}

/// `∫_{0 < A_u ≤ reach} f(u) h(u) du` for a ball A in dimension ≤ 3.
/// `kinks` are points where h is not smooth.
pub(crate) fn shell_integral<H: Fn(&[f64]) -> f64>(
    a: &SetGeometry,
    f: RdWeightFn,
    reach: f64,
    h: H,
    kinks: &[&[f64]],
    cfg: &QuadConfig,
) -> Result<f64, RdKernelError> {
    let d = a.dim();
    if d > 3 {
        return Err(RdKernelError::UnsupportedDimension(d));
    }
    if !(reach > 0.0) {
        return Ok(0.0);
    }
    let c = a.center();
    let r0 = a.radius();
    let r1 = r0 + reach;
    // kinks and the origin (where a radial weight may be singular), relative to c
    let mut rel: Vec<Vec<f64>> = kinks.iter().map(|k| k.iter().zip(c).map(|(x, c)| x - c).collect()).collect();
    if norm(c) > 0.0 {
        rel.push(c.iter().map(|v| -v).collect());
    }
    let rule = angular_rule(d, &rel);
    let mut cuts: Vec<f64> = rel.iter().map(|k| norm(k)).filter(|&r| r > r0 && r < r1).collect();
    cuts.push(r0);
    cuts.push(r1);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let radial = |rho: f64| -> f64 {
        let s: f64 = rule
            .iter()
            .map(|(dir, w)| {
                let mut u = [0.0; 3];
                for i in 0..d {
                    u[i] = c[i] + rho * dir[i];
                }
                w * f.eval(&u[..d]) * h(&u[..d])
            })
            .sum();
        s * rho.powi(d as i32 - 1)
    };
    let parts = cuts.windows(2).map(|w| integrate_1d(&radial, w[0], w[1], cfg));
    Ok(combine(parts)?.value)
}

fn check_h(h: f64) -> Result<(), RdKernelError> {
    if h > 0.0 && h <= 1.0 {
        Ok(())
    } else {
        Err(RdKernelError::InvalidParameter(format!("H = {h} not in (0, 1]")))
    }
}

#[inline]
fn pow2h(r: f64, h: f64) -> f64 {
    if h == 1.0 {
        r * r
    } else {
        r.powf(2.0 * h)
    }
}

/// `K_{H,A,f,±}(x,y)` by shell cubature, d ≤ 3.
///
/// The − sign gives a covariance. The + sign is positive semidefinite on the
/// half-line but not on ℝᵈ in general: at y = −x the off-diagonal entry
/// exceeds the diagonal ones.
pub fn k_haf(
    a: &SetGeometry,
    f: RdWeightFn,
    h: f64,
    sign: QSign,
    x: &[f64],
    y: &[f64],
    cfg: &QuadConfig,
) -> Result<f64, RdKernelError> {
    check_h(h)?;
    let d = a.dim();
    if d > 3 {
        return Err(RdKernelError::UnsupportedDimension(d));
    }
    f.validate(d)?;
    let reach = set_distance(a, x)?.min(set_distance(a, y)?);
    if reach <= 0.0 {
        return Ok(0.0);
    }
    // fixed argument order makes the cubature exactly symmetric
    let (p, q) = if x.partial_cmp(y) == Some(std::cmp::Ordering::Greater) { (y, x) } else { (x, y) };
    let mid: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    let gap = pow2h(dist(p, q), h);
    let integrand = |u: &[f64]| -> f64 {
        let base = pow2h(dist(p, u), h) + pow2h(dist(q, u), h);
        match sign {
            QSign::Minus => base - gap,
            // ‖x + y − 2u‖ = 2‖(x+y)/2 − u‖
            QSign::Plus => base - pow2h(2.0 * dist(&mid, u), h),
        }
    };
    let kinks: Vec<&[f64]> = match sign {
        QSign::Minus => vec![p, q],
        QSign::Plus => vec![p, q, &mid],
    };
    shell_integral(a, f, reach, integrand, &kinks, cfg)
}

/// The one-dimensional kernel on the half-line ℝ₊ with A = [0, r₀]:
/// `∫_{r₀}^{x∧y} f(u) Q_{H,±}(x−u, y−u) du`. With sign + and 2H = b < 1
/// this is (1−b)·R_{f,b}(x,y) minus the contribution of [0, r₀].
pub fn k_haf_half_line(
    radius: f64,
    f: RdWeightFn,
    h: f64,
    sign: QSign,
    x: f64,
    y: f64,
    cfg: &QuadConfig,
) -> Result<f64, RdKernelError> {
    check_h(h)?;
    f.validate(1)?;
    if !(radius >= 0.0) || !(x >= 0.0 && y >= 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(RdKernelError::InvalidParameter("need r0 >= 0 and x, y >= 0".into()));
    }
    let m = x.min(y);
    if m <= radius {
        return Ok(0.0);
    }
    let gap = pow2h((x - y).abs(), h);
    let g = |u: f64| {
        let base = pow2h(x - u, h) + pow2h(y - u, h);
        let q = match sign {
            QSign::Minus => base - gap,
            QSign::Plus => base - pow2h(x + y - 2.0 * u, h),
        };
        f.eval_radius(u) * q
    };
    let lo = match f {
        RdWeightFn::RadialPower(a) if a.fract() != 0.0 => Some(a),
        _ => None,
    };
    let hi = if (2.0 * h).fract() != 0.0 { Some(2.0 * h) } else { None };
    Ok(integrate_1d_singular(g, radius, m, EndpointSingularity::new(lo, hi), cfg)?.value)
}
