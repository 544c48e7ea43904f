//! Closed forms (method 4) through incomplete beta/gamma, Kummer, Gauss
//! hypergeometric and exponential-integral functions.
//!
//! Every kernel reduces to two moments of the weight over [0, m]:
//! `P(m, x, p) = ∫₀^m f(u)(x−u)^p du` and
//! `Λ(m, x, κ) = ∫₀^m f(u)(x−u) ln(κ(x−u)) du`, with x ≥ m.

use super::{check_times, KernelError, KernelSpec, Shape, WeightFn};
use crate::specfun::{
    beta, digamma, exp_integral_e1, exp_integral_ei, hyp1f1_with, hyp2f1_with, inc_beta_parts,
    lower_inc_gamma, upper_inc_gamma, SpecFunConfig, EULER_GAMMA,
};

/// Series truncation for the hypergeometric pieces, tighter than the default.
const SERIES: SpecFunConfig = SpecFunConfig { series_tol: 1e-16, max_terms: 10_000 };
use std::f64::consts::LN_2;

/// R_{f,b}(s,t) or K_f(s,t) in closed form.
pub fn kernel_eval_closed(spec: &KernelSpec, s: f64, t: f64) -> Result<f64, KernelError> {
    spec.validate()?;
    let (m, big) = check_times(s, t)?;
    if m == 0.0 {
        return Ok(0.0);
    }
    let (scale, w) = spec.weight.normalized();
    let c = 0.5 * (m + big);
    let v = match spec.effective_shape() {
        Shape::Weighted(b) if b == 0.0 => w.mass(m),
        Shape::Weighted(b) => {
            (power_moment(w, m, m, b)? + power_moment(w, m, big, b)?
                - 2f64.powf(b) * power_moment(w, m, c, b)?)
                / (1.0 - b)
        }
        Shape::LogKernel => {
            2.0 * log_moment(w, m, c, LN_2)? - log_moment(w, m, m, 0.0)? - log_moment(w, m, big, 0.0)?
        }
    };
    Ok(scale * v)
}

/// C_{f,b}(s,t) in closed form, b ∈ (1, 2].
pub fn nu_cov_closed(spec: &KernelSpec, s: f64, t: f64) -> Result<f64, KernelError> {
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
    Ok(scale * 2f64.powf(b - 2.0) * power_moment(w, m, 0.5 * (m + big), b - 2.0)?)
}

/// `∫₀^m f(u)(x−u)^p du` for a normalized weight, 0 ≤ m ≤ x, p > −1.
pub(crate) fn power_moment(w: WeightFn, m: f64, x: f64, p: f64) -> Result<f64, KernelError> {
    if m <= 0.0 {
        return Ok(0.0);
    }
    let x = x.max(m);
    match w {
        WeightFn::PowerLaw(a) => {
            let full = beta(a + 1.0, p + 1.0)?;
            let front = x.powf(a + p + 1.0);
            if m >= x {
                return Ok(front * full);
            }
            let ln_x = x.ln();
            let ib = inc_beta_parts(m / x, m.ln() - ln_x, (x - m).ln() - ln_x, a + 1.0, p + 1.0, full);
            Ok(front * ib)
        }
        WeightFn::Exponential(a) if a > 0.0 => {
            // e^{ax} a^{−k} [γ(k, ax) − γ(k, a(x−m))], k = p + 1
            let k = p + 1.0;
            let (lo, hi) = (a * (x - m), a * x);
            let diff = if lo > k {
                upper_inc_gamma(lo, k)? - upper_inc_gamma(hi, k)?
            } else {
                lower_inc_gamma(hi, k)? - lower_inc_gamma(lo, k)?
            };
            finite("exponential power moment", hi.exp() * a.powf(-k) * diff)
        }
        WeightFn::Exponential(a) if a < 0.0 => {
            // e^{ax} [G(x) − G(x−m)], G(y) = ∫₀^y e^{−aw} w^p dw = y^k M(k, k+1, −ay)/k
            let k = p + 1.0;
            let g = |y: f64| -> Result<f64, KernelError> {
                if y <= 0.0 {
                    return Ok(0.0);
                }
                Ok(y.powf(k) * hyp1f1_with(-a * y, k, k + 1.0, &SERIES)? / k)
            };
            finite("exponential power moment", (a * x).exp() * (g(x)? - g(x - m)?))
        }
        WeightFn::Exponential(_) => power_moment(WeightFn::PowerLaw(0.0), m, x, p),
        WeightFn::Constant(c) => Ok(c * power_moment(WeightFn::PowerLaw(0.0), m, x, p)?),
    }
}

/// `∫₀^m f(u)(x−u)(ln(x−u) + ln κ) du` for a normalized weight, 0 < m ≤ x.
pub(crate) fn log_moment(w: WeightFn, m: f64, x: f64, ln_kappa: f64) -> Result<f64, KernelError> {
    if m <= 0.0 {
        return Ok(0.0);
    }
    let x = x.max(m);
    let lx = x.ln() + ln_kappa;
    let whole = m >= x;
    let y = m / x;
    let omy = (x - m) / x;
    let ln1my = omy.ln();
    match w {
        WeightFn::PowerLaw(a) => {
            let (lin, log) = if whole {
                (1.0 / ((a + 1.0) * (a + 2.0)), r_const(a))
            } else {
                let lin = y.powf(a + 1.0) / (a + 1.0) - y.powf(a + 2.0) / (a + 2.0);
                (lin, j_integral(a, y, ln1my)?)
            };
            Ok(x.powf(a + 2.0) * (lx * lin + log))
        }
        WeightFn::Exponential(a) if a != 0.0 => {
            let alpha = a * x;
            let (lin, log) = if whole {
                (e_linear(alpha, 1.0), gamma2(alpha)?)
            } else {
                (e_linear(alpha, y), l_log(alpha, y, omy)?)
            };
            finite("exponential log moment", x * x * (lx * lin + log))
        }
        WeightFn::Exponential(_) => log_moment(WeightFn::PowerLaw(0.0), m, x, ln_kappa),
        WeightFn::Constant(c) => Ok(c * log_moment(WeightFn::PowerLaw(0.0), m, x, ln_kappa)?),
    }
}

fn finite(what: &str, v: f64) -> Result<f64, KernelError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(KernelError::InvalidParameter(format!("{what} overflowed")))
    }
}

/// `r_a = ∫₀¹ u^a (1−u) ln(1−u) du = B(a+1, 2)(ψ(2) − ψ(a+3))`.
pub(crate) fn r_const(a: f64) -> f64 {
    (1.0 - EULER_GAMMA - digamma(a + 3.0)) / ((a + 1.0) * (a + 2.0))
}

/// `∫₀^y u^a (1−u) ln(1−u) du` for 0 ≤ y < 1, with `ln1my = ln(1−y)`.
pub(crate) fn j_integral(a: f64, y: f64, ln1my: f64) -> Result<f64, KernelError> {
    if y <= 0.0 {
        return Ok(0.0);
    }
    let f1 = hyp2f1_with(y, 1.0, a + 3.0, a + 4.0, &SERIES)?;
    let f2 = hyp2f1_with(y, 1.0, a + 2.0, a + 3.0, &SERIES)?;
    let bracket = (a + 1.0) * y * y * f1 - (a + 3.0) * y * f2
        + (a + 3.0) * (a * (y - 1.0) + y - 2.0) * ln1my;
    Ok(-y.powf(a + 1.0) / ((a + 1.0) * (a + 2.0) * (a + 3.0)) * bracket)
}

/// `∫₀^y e^{αv}(1−v) dv`.
pub(crate) fn e_linear(alpha: f64, y: f64) -> f64 {
    if (alpha * y).abs() < 0.5 {
        e_linear_series(alpha, y)
    } else {
        e_linear_closed(alpha, y)
    }
}

fn e_linear_series(alpha: f64, y: f64) -> f64 {
    let z = alpha * y;
    let (mut term, mut sum) = (1.0, 0.0);
    for k in 0..40 {
        let kf = k as f64;
        let add = term * (1.0 / (kf + 1.0) - y / (kf + 2.0));
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
        term *= z / (kf + 1.0);
    }
    y * sum
}

fn e_linear_closed(alpha: f64, y: f64) -> f64 {
    let z = alpha * y;
    ((1.0 - y) * z.exp() - 1.0) / alpha + z.exp_m1() / (alpha * alpha)
}

/// `∫₀^y e^{αv}(1−v) ln(1−v) dv` for 0 < y < 1, α ≠ 0; `omy = 1 − y`.
pub(crate) fn l_log(alpha: f64, y: f64, omy: f64) -> Result<f64, KernelError> {
    if (alpha * y).abs() < 0.02 {
        l_log_series(alpha, y, omy)
    } else {
        l_log_closed(alpha, y, omy)
    }
}

/// Expansion of e^{αv}; the k-th coefficient is `∫₀^y v^k(1−v)ln(1−v) dv`.
fn l_log_series(alpha: f64, y: f64, omy: f64) -> Result<f64, KernelError> {
    let ln1my = omy.ln();
    let (mut coef, mut sum) = (1.0, 0.0);
    for k in 0..20 {
        let add = coef * j_integral(k as f64, y, ln1my)?;
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
        coef *= alpha / (k as f64 + 1.0);
    }
    Ok(sum)
}

fn l_log_closed(alpha: f64, y: f64, omy: f64) -> Result<f64, KernelError> {
    let ln1my = omy.ln();
    let head = (alpha * y).exp() * ((alpha * omy + 1.0) * ln1my + 1.0);
    let tail = if alpha > 0.0 {
        alpha.exp() * (exp_integral_e1(alpha * omy)? - exp_integral_e1(alpha)?) - 1.0
    } else {
        alpha.exp() * (exp_integral_ei(-alpha)? - exp_integral_ei(-alpha * omy)?) - 1.0
    };
    Ok((head + tail) / (alpha * alpha))
}

/// `γ₂(α) = ∫₀¹ e^{αu}(1−u) ln(1−u) du`.
pub(crate) fn gamma2(alpha: f64) -> Result<f64, KernelError> {
    if alpha.abs() < 0.5 {
        Ok(gamma2_series(alpha))
    } else {
        gamma2_closed(alpha)
    }
}

fn gamma2_series(alpha: f64) -> f64 {
    let (mut coef, mut sum) = (1.0, 0.0);
    for k in 0..30 {
        let add = coef * r_const(k as f64);
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
        coef *= alpha / (k as f64 + 1.0);
    }
    sum
}

fn gamma2_closed(alpha: f64) -> Result<f64, KernelError> {
    let e1 = if alpha > 0.0 {
        upper_inc_gamma(alpha, 0.0)?
    } else {
        -exp_integral_ei(-alpha)?
    };
    Ok(-alpha.exp() * (e1 + EULER_GAMMA - 1.0 + alpha.abs().ln() + (-alpha).exp()) / (alpha * alpha))
}
