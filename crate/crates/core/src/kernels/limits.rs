//! Increment variances, the b > 1 integral representation, the b → 1
//! continuity gap and large-lag / small-lag limits.
//!
//! The finite-horizon proxies are written so that no large terms cancel:
//! differences of powers go through [`pow_diff`].

use super::closed::{nu_cov_closed, power_moment};
use super::quad::{integrate, kernel_eval_quad, QuadMethod};
use super::{check_times, kernel_eval_closed, pow_diff, KernelError, KernelSpec, Shape, WeightFn};
use crate::quadrature::{integrate_2d_singular, EndpointSingularity, Node, QuadConfig};
use crate::specfun::beta;
use std::f64::consts::LN_2;

/// Which limit [`memory_limits`] probes, with the finite proxy parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MemoryProbe {
    /// `R(s, t+T)` for b < 1, `R(s, t+T)/T^{b−1}` for b > 1.
    LongRangeMemory { s: f64, t: f64, horizon: f64 },
    /// `T^{2−b} E[(ζ_ν − ζ_r)(ζ_{t+T} − ζ_{s+T})]`.
    LongRangeDependence { r: f64, nu: f64, s: f64, t: f64, horizon: f64 },
    /// `E(ζ_{s+ε} − ζ_s)²/ε^κ` with κ = 1 (b = 0), 1+b (0 < b < 1) or 2 (b > 1).
    IncrementRatio { s: f64, eps: f64 },
    /// `E(ζ_ε²)/ε^κ` with κ = 1+b, or 1+b+a for f = u^a, a ≠ 0.
    SmallTimeVariance { eps: f64 },
}

fn weighted_b(spec: &KernelSpec, what: &str) -> Result<f64, KernelError> {
    match spec.shape {
        Shape::Weighted(b) => Ok(b),
        Shape::LogKernel => Err(KernelError::Hypothesis(format!("{what} needs a weighted kernel"))),
    }
}

fn positive(name: &str, v: f64) -> Result<(), KernelError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(KernelError::InvalidParameter(format!("{name} = {v} must be > 0")))
    }
}

/// `(2 − 2^b)/(1 − b)`, continuous at b = 1.
fn diag_factor(b: f64) -> f64 {
    if b == 1.0 {
        2.0 * LN_2
    } else {
        (2.0 - 2f64.powf(b)) / (1.0 - b)
    }
}

fn flags(w: WeightFn, hi: f64) -> EndpointSingularity {
    let hi = if hi == hi.floor() { None } else { Some(hi) };
    EndpointSingularity::new(w.origin_exponent(), hi)
}

/// Numerically evaluated left-hand side of the chosen limit.
pub fn memory_limits(spec: &KernelSpec, probe: MemoryProbe, cfg: &QuadConfig) -> Result<f64, KernelError> {
    spec.validate()?;
    let (scale, w) = spec.weight.normalized();
    let gk = QuadMethod::GaussKronrod;
    let v = match probe {
        MemoryProbe::LongRangeMemory { s, t, horizon } => {
            let b = weighted_b(spec, "long-range memory")?;
            positive("s", s)?;
            positive("T", horizon)?;
            if s > t + horizon {
                return Err(KernelError::Hypothesis("need s <= t + T".into()));
            }
            if b == 0.0 {
                w.mass(s)
            } else {
                let y0 = horizon + t;
                let g = |n: Node| {
                    let x = n.to_hi;
                    w.eval(n.u) * (x.powf(b) - pow_diff(y0 - n.u, x, b))
                };
                let r = integrate(g, 0.0, s, flags(w, b), gk, cfg)?.value / (1.0 - b);
                if b > 1.0 {
                    r / horizon.powf(b - 1.0)
                } else {
                    r
                }
            }
        }
        MemoryProbe::LongRangeDependence { r, nu, s, t, horizon } => {
            let b = weighted_b(spec, "long-range dependence")?;
            positive("r", r)?;
            positive("T", horizon)?;
            if !(r <= nu && s <= t && nu <= s + horizon) {
                return Err(KernelError::Hypothesis("need r <= nu, s <= t, nu <= s + T".into()));
            }
            if b == 0.0 {
                0.0
            } else {
                let d = t - s;
                let part = |x: f64| -> Result<f64, KernelError> {
                    let g = |n: Node| {
                        let u = n.u;
                        w.eval(u)
                            * (pow_diff(horizon + s - u, d, b) - pow_diff(horizon + s + x - 2.0 * u, d, b))
                    };
                    let sing = EndpointSingularity::new(w.origin_exponent(), None);
                    Ok(integrate(g, 0.0, x, sing, gk, cfg)?.value)
                };
                horizon.powf(2.0 - b) * (part(nu)? - part(r)?) / (1.0 - b)
            }
        }
        MemoryProbe::IncrementRatio { s, eps } => {
            let b = weighted_b(spec, "increment ratio")?;
            positive("s", s)?;
            positive("eps", eps)?;
            if b == 0.0 {
                (w.mass(s + eps) - w.mass(s)) / eps
            } else {
                let (near, far) = increment_terms(w, b, s, s + eps, cfg, gk)?;
                let kappa = if b > 1.0 { 2.0 } else { 1.0 + b };
                (near + far) / eps.powf(kappa)
            }
        }
        MemoryProbe::SmallTimeVariance { eps } => {
            positive("eps", eps)?;
            let b = spec.b();
            let g = |n: Node| w.eval(n.u) * n.to_hi.powf(b);
            let var = diag_factor(b) * integrate(g, 0.0, eps, flags(w, b), gk, cfg)?.value;
            let a = match w {
                WeightFn::PowerLaw(a) => a,
                _ => 0.0,
            };
            var / eps.powf(1.0 + b + a)
        }
    };
    Ok(scale * v)
}

/// Closed-form limit matching [`memory_limits`].
pub fn memory_limit_target(spec: &KernelSpec, probe: MemoryProbe) -> Result<f64, KernelError> {
    spec.validate()?;
    let (scale, w) = spec.weight.normalized();
    let v = match probe {
        MemoryProbe::LongRangeMemory { s, .. } => {
            let b = weighted_b(spec, "long-range memory")?;
            if b > 1.0 {
                b / (b - 1.0) * power_moment(w, s, s, 1.0)?
            } else {
                power_moment(w, s, s, b)? / (1.0 - b)
            }
        }
        MemoryProbe::LongRangeDependence { r, nu, s, t, .. } => {
            let b = weighted_b(spec, "long-range dependence")?;
            if b == 0.0 {
                0.0
            } else {
                let inner = power_moment(w, nu, nu, 1.0)? - power_moment(w, r, nu, 1.0)?
                    + (nu - r) * w.mass(r);
                b * (t - s) * inner
            }
        }
        MemoryProbe::IncrementRatio { s, .. } => {
            let b = weighted_b(spec, "increment ratio")?;
            if b == 0.0 {
                w.eval(s)
            } else if b > 1.0 {
                2f64.powf(b - 2.0) * b * power_moment(w, s, s, b - 2.0)?
            } else {
                return Err(KernelError::Hypothesis(
                    "for b in (0,1) the increment ratio has bounds, not a limit".into(),
                ));
            }
        }
        MemoryProbe::SmallTimeVariance { .. } => {
            let b = spec.b();
            match w {
                WeightFn::PowerLaw(a) if a != 0.0 => diag_factor(b) * beta(a + 1.0, b + 1.0)?,
                _ => diag_factor(b) / (1.0 + b),
            }
        }
    };
    Ok(scale * v)
}

/// The two terms of `E(ζ_t − ζ_s)²` for s < t: the part from (s, t] and the
/// part from [0, s], both from the defining integrals.
fn increment_terms(
    w: WeightFn,
    b: f64,
    s: f64,
    t: f64,
    cfg: &QuadConfig,
    method: QuadMethod,
) -> Result<(f64, f64), KernelError> {
    let near_g = |n: Node| w.eval(n.u) * n.to_hi.powf(b);
    let near_sing = if s == 0.0 { flags(w, b) } else { flags(WeightFn::PowerLaw(0.0), b) };
    let near = diag_factor(b) * integrate(near_g, s, t, near_sing, method, cfg)?.value;
    if s == 0.0 {
        return Ok((near, 0.0));
    }
    // 2(t+s−2u)^b − 2^b(t−u)^b − 2^b(s−u)^b as a second difference in x = s − u
    let d = 0.5 * (t - s);
    let two_b = 2f64.powf(b);
    let g = |u: f64, x: f64| w.eval(u) * two_b * (pow_diff(x, d, b) - pow_diff(x + d, d, b));
    // the integrand varies on the scale t − s next to u = s
    let mut cuts = vec![0.0];
    for k in [64.0, 1.0] {
        let c = s - k * (t - s);
        if c > *cuts.last().unwrap() {
            cuts.push(c);
        }
    }
    cuts.push(s);
    let mut far = 0.0;
    let last = cuts.len() - 2;
    for (i, win) in cuts.windows(2).enumerate() {
        let lo = if i == 0 { w.origin_exponent() } else { None };
        let hi = if i == last && b != b.floor() { Some(b) } else { None };
        let past = s - win[1];
        let h = |n: Node| g(n.u, past + n.to_hi);
        far += integrate(h, win[0], win[1], EndpointSingularity::new(lo, hi), method, cfg)?.value;
    }
    Ok((near, far / (1.0 - b)))
}

/// `E(ζ_t − ζ_s)² = k(t,t) + k(s,s) − 2k(s,t)` from closed-form kernel values.
pub fn increment_variance(spec: &KernelSpec, s: f64, t: f64) -> Result<f64, KernelError> {
    let k = |x: f64, y: f64| kernel_eval_closed(spec, x, y);
    Ok(k(t, t)? + k(s, s)? - 2.0 * k(s, t)?)
}

/// Two-term decomposition of `E(ζ_t − ζ_s)²` by direct quadrature:
/// `(2−2^b)/(1−b) ∫_s^t f(u)(t−u)^b du` and
/// `(1−b)⁻¹ ∫₀^s f(u)[2(t+s−2u)^b − 2^b(t−u)^b − 2^b(s−u)^b] du`.
pub fn increment_decomposition(
    spec: &KernelSpec,
    s: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<(f64, f64), KernelError> {
    spec.validate()?;
    let b = weighted_b(spec, "increment decomposition")?;
    let (s, t) = check_times(s, t)?;
    let (scale, w) = spec.weight.normalized();
    if s == t {
        return Ok((0.0, 0.0));
    }
    if b == 0.0 {
        return Ok((scale * (w.mass(t) - w.mass(s)), 0.0));
    }
    let (near, far) = increment_terms(w, b, s, t, cfg, QuadMethod::GaussKronrod)?;
    Ok((scale * near, scale * far))
}

/// `b ∫₀^{s∧t} ∫₀^{s∨t} C_{f,b}(r, v) dv dr`, which equals `R_{f,b}(s,t)` for b > 1.
///
/// The square [0, s∧t]² is folded onto the triangle v < r (C is symmetric
/// with a cusp on the diagonal) and mapped to the unit square.
pub fn representation_integral(
    spec: &KernelSpec,
    s: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<f64, KernelError> {
    spec.validate()?;
    let b = match spec.shape {
        Shape::Weighted(b) if b > 1.0 => b,
        _ => return Err(KernelError::Hypothesis("integral representation needs b in (1, 2]".into())),
    };
    let (m, big) = check_times(s, t)?;
    if m == 0.0 {
        return Ok(0.0);
    }
    let c = |r: f64, v: f64| nu_cov_closed(spec, r, v).unwrap_or(f64::NAN);
    let frac = |e: f64| if e == e.floor() { None } else { Some(e) };
    let a0 = match spec.weight {
        WeightFn::PowerLaw(a) => a,
        _ => 0.0,
    };
    let cusp = frac(b - 1.0);
    let tri = integrate_2d_singular(
        |x, y| x * c(x, x * y),
        [(0.0, m), (0.0, 1.0)],
        [EndpointSingularity::new(frac(a0 + b), None), EndpointSingularity::new(None, cusp)],
        cfg,
    )?
    .value;
    let rect = if big > m { corner_rect(&c, m, big, a0, b, cfg)? } else { 0.0 };
    Ok(b * (2.0 * tri + rect))
}

/// `∫₀^m ∫_m^big C(r, v) dv dr` with C cusped at the corner (m, m).
///
/// In p = m − r, q = v − m the corner square [0, L]² is split along p = q and
/// each half is mapped by q = pw (p = qw), which leaves the cusp in one graded
/// variable. L ≤ m/2 keeps the weight origin r = 0 out of the square.
fn corner_rect<C: Fn(f64, f64) -> f64>(c: &C, m: f64, big: f64, a0: f64, b: f64, cfg: &QuadConfig) -> Result<f64, KernelError> {
    let frac = |e: f64| if e == e.floor() { None } else { Some(e) };
    let side = (0.5 * m).min(big - m);
    let g = |p: f64, q: f64| c(m - p, m + q);
    let radial = [EndpointSingularity::new(frac(b), None), EndpointSingularity::NONE];
    let lower = integrate_2d_singular(|p, w| p * g(p, p * w), [(0.0, side), (0.0, 1.0)], radial, cfg)?.value;
    let upper = integrate_2d_singular(|q, w| q * g(q * w, q), [(0.0, side), (0.0, 1.0)], radial, cfg)?.value;
    let origin = [EndpointSingularity::new(frac(a0 + 1.0), None), EndpointSingularity::NONE];
    let mut rest = integrate_2d_singular(c, [(0.0, m - side), (m, big)], origin, cfg)?.value;
    if side < big - m {
        rest += integrate_2d_singular(c, [(m - side, m), (m + side, big)], [EndpointSingularity::NONE; 2], cfg)?.value;
    }
    Ok(lower + upper + rest)
}

/// `|R_{f,b}(s,t) − K_f(s,t)|` with both kernels by quadrature.
pub fn continuity_gap(
    weight: WeightFn,
    b: f64,
    s: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<f64, KernelError> {
    let gk = QuadMethod::GaussKronrod;
    let r = kernel_eval_quad(&KernelSpec::weighted(weight, b)?, s, t, cfg, gk)?;
    let k = kernel_eval_quad(&KernelSpec::log_kernel(weight)?, s, t, cfg, gk)?;
    Ok((r - k).abs())
}
