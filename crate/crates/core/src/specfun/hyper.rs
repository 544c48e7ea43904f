//! Confluent (₁F₁) and Gauss (₂F₁) hypergeometric functions on the real line.

use super::{digamma, gamma, rgamma, SpecFunConfig, SpecFunError};

/// Kummer's function M(a, b, x) = Σ (a)ₙ xⁿ / ((b)ₙ n!), for 0 < a < b.
pub fn hyp1f1(x: f64, a: f64, b: f64) -> Result<f64, SpecFunError> {
    hyp1f1_with(x, a, b, &SpecFunConfig::default())
}

pub fn hyp1f1_with(x: f64, a: f64, b: f64, cfg: &SpecFunConfig) -> Result<f64, SpecFunError> {
    cfg.validate()?;
    if !(a > 0.0 && b > a) || !x.is_finite() {
        return Err(SpecFunError::domain(
            "hyp1f1",
            format!("need 0 < a < b and finite x, got a={a}, b={b}, x={x}"),
        ));
    }
    if x < 0.0 {
        // Kummer transformation: every term of the remaining series is positive
        return Ok(x.exp() * kummer_series(-x, b - a, b, cfg)?);
    }
    kummer_series(x, a, b, cfg)
}

fn kummer_series(x: f64, a: f64, b: f64, cfg: &SpecFunConfig) -> Result<f64, SpecFunError> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..cfg.max_terms {
        let n = n as f64;
        term *= (a + n) * x / ((b + n) * (n + 1.0));
        sum += term;
        if term.abs() <= cfg.series_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NonConvergence {
        func: "hyp1f1",
        terms: cfg.max_terms,
    })
}

/// Gauss ₂F₁(a, b; c; x) for 0 ≤ x < 1.
///
/// Direct series for x ≤ 0.75; above that the 1 − x connection formulas are
/// used when c − a − b is zero or not an integer. Other integer cases fall back
/// to the direct series and may hit `max_terms`.
pub fn hyp2f1(x: f64, a: f64, b: f64, c: f64) -> Result<f64, SpecFunError> {
    hyp2f1_with(x, a, b, c, &SpecFunConfig::default())
}

pub fn hyp2f1_with(
    x: f64,
    a: f64,
    b: f64,
    c: f64,
    cfg: &SpecFunConfig,
) -> Result<f64, SpecFunError> {
    cfg.validate()?;
    if !(0.0..1.0).contains(&x) {
        return Err(SpecFunError::domain("hyp2f1", format!("x = {x} outside [0, 1)")));
    }
    if !(b > 0.0) || !(c >= b) {
        return Err(SpecFunError::domain(
            "hyp2f1",
            format!("need b > 0 and c >= b, got b={b}, c={c}"),
        ));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x <= 0.75 {
        return gauss_series(x, a, b, c, cfg);
    }
    let s = c - a - b;
    let nearest = s.round();
    // c = a + b up to rounding in the caller's parameter arithmetic
    if s.abs() <= 1e-12 * c.abs().max(1.0) {
        return log_case(x, a, b, cfg);
    }
    if (s - nearest).abs() > 1e-9 {
        let y = 1.0 - x;
        let t1 = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b);
        let t2 = gamma(c) * gamma(-s) * rgamma(a) * rgamma(b);
        let f1 = if t1 != 0.0 { gauss_series(y, a, b, 1.0 - s, cfg)? } else { 0.0 };
        let f2 = if t2 != 0.0 { gauss_series(y, c - a, c - b, 1.0 + s, cfg)? } else { 0.0 };
        return Ok(t1 * f1 + y.powf(s) * t2 * f2);
    }
    gauss_series(x, a, b, c, cfg)
}

fn gauss_series(x: f64, a: f64, b: f64, c: f64, cfg: &SpecFunConfig) -> Result<f64, SpecFunError> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..cfg.max_terms {
        let n = n as f64;
        term *= (a + n) * (b + n) * x / ((c + n) * (n + 1.0));
        sum += term;
        if term == 0.0 || term.abs() <= cfg.series_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NonConvergence {
        func: "hyp2f1",
        terms: cfg.max_terms,
    })
}

/// Degenerate case c = a + b around x = 1:
/// F = Γ(a+b)/(Γ(a)Γ(b)) Σ (a)ₙ(b)ₙ/(n!)² [2ψ(n+1) − ψ(a+n) − ψ(b+n) − ln(1−x)] (1−x)ⁿ.
fn log_case(x: f64, a: f64, b: f64, cfg: &SpecFunConfig) -> Result<f64, SpecFunError> {
    let y = 1.0 - x;
    let ly = y.ln();
    let pref = gamma(a + b) * rgamma(a) * rgamma(b);
    let mut coef = 1.0;
    let mut psi1 = digamma(1.0);
    let mut psia = digamma(a);
    let mut psib = digamma(b);
    let mut sum = 0.0;
    for n in 0..cfg.max_terms {
        let nf = n as f64;
        if n > 0 {
            coef *= (a + nf - 1.0) * (b + nf - 1.0) * y / (nf * nf);
            psi1 += 1.0 / nf;
            psia += 1.0 / (a + nf - 1.0);
            psib += 1.0 / (b + nf - 1.0);
        }
        let term = coef * (2.0 * psi1 - psia - psib - ly);
        sum += term;
        if n > 2 && term.abs() <= 1e-17 * sum.abs() {
            return Ok(pref * sum);
        }
    }
    Err(SpecFunError::NonConvergence {
        func: "hyp2f1",
        terms: cfg.max_terms,
    })
}
