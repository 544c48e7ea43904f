//! Complete and (unregularized) incomplete beta functions.

use super::{ln_gamma, SpecFunError, EPS, FPMIN, MAX_ITER};

fn check_shape(func: &'static str, a: f64, b: f64) -> Result<(), SpecFunError> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(SpecFunError::domain(func, format!("shape parameters ({a}, {b}) must be > 0")));
    }
    Ok(())
}

/// ln B(a, b).
pub fn ln_beta(a: f64, b: f64) -> Result<f64, SpecFunError> {
    check_shape("ln_beta", a, b)?;
    Ok(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta(a: f64, b: f64) -> Result<f64, SpecFunError> {
    Ok(ln_beta(a, b)?.exp())
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn betacf(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Incomplete beta with caller-supplied logarithms.
///
/// `ln_x = ln x`, `ln_1mx = ln(1 − x)` and `beta_ab = B(a, b)`. Used by Gram
/// assembly, where the same ratios appear for every parameter value.
#[inline]
pub fn inc_beta_parts(x: f64, ln_x: f64, ln_1mx: f64, a: f64, b: f64, beta_ab: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return beta_ab;
    }
    let front = (a * ln_x + b * ln_1mx).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * betacf(x, a, b) / a
    } else {
        beta_ab - front * betacf(1.0 - x, b, a) / b
    }
}

/// IB(x; a, b) = ∫₀ˣ u^{a−1}(1−u)^{b−1} du (not regularized).
pub fn inc_beta(x: f64, a: f64, b: f64) -> Result<f64, SpecFunError> {
    check_shape("inc_beta", a, b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(SpecFunError::domain("inc_beta", format!("x = {x} outside [0, 1]")));
    }
    let bab = beta(a, b)?;
    Ok(inc_beta_parts(x, x.ln(), (-x).ln_1p(), a, b, bab))
}
