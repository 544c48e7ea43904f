//! Exponential integrals E₁ and Ei.

use super::{SpecFunError, EPS, EULER_GAMMA, FPMIN, MAX_ITER};

/// E₁(x) = ∫ₓ^∞ e^{−u}/u du for x > 0.
pub fn exp_integral_e1(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::domain("exp_integral_e1", format!("x = {x} must be > 0")));
    }
    if x > 1.0 {
        // continued fraction, modified Lentz
        let mut b = x + 1.0;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < EPS {
                return Ok(h * (-x).exp());
            }
        }
        Err(SpecFunError::NonConvergence {
            func: "exp_integral_e1",
            terms: MAX_ITER,
        })
    } else {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for i in 1..MAX_ITER {
            fact *= -x / i as f64;
            let del = -fact / i as f64;
            sum += del;
            if del.abs() < sum.abs() * EPS {
                return Ok(sum - x.ln() - EULER_GAMMA);
            }
        }
        Err(SpecFunError::NonConvergence {
            func: "exp_integral_e1",
            terms: MAX_ITER,
        })
    }
}

/// Ei(x), principal value for x > 0 and −E₁(−x) for x < 0.
pub fn exp_integral_ei(x: f64) -> Result<f64, SpecFunError> {
    if x == 0.0 || x.is_nan() {
        return Err(SpecFunError::domain("exp_integral_ei", "x must be nonzero"));
    }
    if x < 0.0 {
        return Ok(-exp_integral_e1(-x)?);
    }
    if x <= 40.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..MAX_ITER {
            let k = k as f64;
            term *= x / k;
            let del = term / k;
            sum += del;
            if del < EPS * sum {
                return Ok(EULER_GAMMA + x.ln() + sum);
            }
        }
        return Err(SpecFunError::NonConvergence {
            func: "exp_integral_ei",
            terms: MAX_ITER,
        });
    }
    // asymptotic: e^x/x · Σ k!/x^k, truncated at the smallest term
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..100 {
        let prev = term;
        term *= k as f64 / x;
        if term < EPS * sum {
            break;
        }
        if term > prev {
            sum -= prev;
            break;
        }
        sum += term;
    }
    let v = x.exp() / x * sum;
    if v.is_infinite() {
        return Err(SpecFunError::Overflow {
            func: "exp_integral_ei",
        });
    }
    Ok(v)
}
