//! Reference computations shared by the integration tests.
//!
//! Everything here is deliberately independent of the library's adaptive
//! quadrature: integrals use a plain tanh–sinh rule with level doubling.
#![allow(dead_code)]

pub mod specfun;

use std::f64::consts::FRAC_PI_2;

/// ∫_a^b g by tanh–sinh; tolerates integrable endpoint singularities.
/// `g` receives the point together with its distances to a and to b.
pub fn tanh_sinh_dist<G: Fn(f64, f64, f64) -> f64>(g: G, a: f64, b: f64, tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let len = b - a;
    let half = 0.5 * len;
    let tmax = 3.5;
    // sum over nodes t = k·h, k odd at levels > 0
    let node = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let c = s.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (c * c);
        if w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        let dl = len / (1.0 + (2.0 * s).exp());
        let dr = len / (1.0 + (-2.0 * s).exp());
        if dl <= 0.0 || dr <= 0.0 {
            return 0.0;
        }
        let x = if dl < dr { a + dl } else { b - dr };
        w * g(x, dl, dr)
    };
    let mut h = 1.0;
    let mut sum = node(0.0) + (1..=(tmax as i32)).map(|k| node(k as f64) + node(-(k as f64))).sum::<f64>();
    let mut est = h * sum;
    for _ in 0..12 {
        h *= 0.5;
        let n = (tmax / h) as i64;
        sum += (1..=n)
            .step_by(2)
            .map(|k| node(k as f64 * h) + node(-(k as f64) * h))
            .sum::<f64>();
        let next = h * sum;
        if h <= 0.125 && (next - est).abs() <= tol * next.abs().max(1e-3) {
            return next;
        }
        est = next;
    }
    est
}

pub fn tanh_sinh<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, tol: f64) -> f64 {
    tanh_sinh_dist(|x, _, _| g(x), a, b, tol)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    let p = wsfbm_core::specfun::regularized_gamma_p(0.5 * x * x, 0.5).unwrap();
    0.5 * (1.0 + x.signum() * p)
}

/// Kolmogorov–Smirnov statistic of a sample against N(0,1).
pub fn ks_normal(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal_cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// ∫₀ˢ∫₀ᵗ e^{−β(s−u)} k(u,v) e^{−β(t−v)} dv du, split along v = u and u = t
/// where the kernel may have a cusp.
pub fn ou_double<K: Fn(f64, f64) -> f64>(k: &K, beta: f64, s: f64, t: f64, tol: f64) -> f64 {
    let inner = |u: f64| -> f64 {
        let g = |v: f64| k(u, v) * (-beta * (t - v)).exp();
        if u < t {
            tanh_sinh(g, 0.0, u, tol) + tanh_sinh(g, u, t, tol)
        } else {
            tanh_sinh(g, 0.0, t, tol)
        }
    };
    let outer = |u: f64| (-beta * (s - u)).exp() * inner(u);
    if t < s {
        tanh_sinh(outer, 0.0, t, tol) + tanh_sinh(outer, t, s, tol)
    } else {
        tanh_sinh(outer, 0.0, s, tol)
    }
}

/// ∫₀ˢ e^{−β(s−u)} k(u,t) du, split at u = t.
pub fn ou_single<K: Fn(f64, f64) -> f64>(k: &K, beta: f64, s: f64, t: f64, tol: f64) -> f64 {
    let g = |u: f64| (-beta * (s - u)).exp() * k(u, t);
    if t < s {
        tanh_sinh(g, 0.0, t, tol) + tanh_sinh(g, t, s, tol)
    } else {
        tanh_sinh(g, 0.0, s, tol)
    }
}

/// OU covariance for b ∈ (1,2] straight from its double-integral definition:
/// σ²b ∫∫ e^{−β(s−u)} C(u,v) e^{−β(t−v)}.
pub fn ou_naive_nu<C: Fn(f64, f64) -> f64>(c: &C, b: f64, beta: f64, sigma: f64, s: f64, t: f64) -> f64 {
    sigma * sigma * b * ou_double(c, beta, s, t, 1e-10)
}

/// OU covariance from the forward-integral form with kernel `r`:
/// σ²[r(s,t) − β(∫e^{−β(s−u)}r(u,t) + ∫e^{−β(t−v)}r(v,s)) + β²∫∫ …].
pub fn ou_naive_forward<R: Fn(f64, f64) -> f64>(r: &R, beta: f64, sigma: f64, s: f64, t: f64) -> f64 {
    let tol = 1e-10;
    let single = ou_single(r, beta, s, t, tol) + ou_single(r, beta, t, s, tol);
    sigma * sigma * (r(s, t) - beta * single + beta * beta * ou_double(r, beta, s, t, tol))
}
