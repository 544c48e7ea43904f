//! Nelder–Mead minimization and the χ²₁ quantile.

use super::InferenceError;
use crate::specfun::regularized_gamma_p;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Stopping rule: simplex diameter ≤ `xtol` and value spread ≤ `ftol`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NmTols {
    pub xtol: f64,
    pub ftol: f64,
    pub max_evals: usize,
}

/// Minimize `f` from the simplex {x0, x0 + stepᵢ·eᵢ}. Infeasible points
/// should return +∞.
pub(crate) fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], steps: &[f64], tols: NmTols) -> Minimum {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let v = f(&x);
        simplex.push((x, v));
    }
    let mut evals = n + 1;
    let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect()
    };
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diam = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let spread = simplex[n].1 - simplex[0].1;
        if diam <= tols.xtol && spread <= tols.ftol {
            return Minimum { x: simplex[0].0.clone(), f: simplex[0].1, evals, converged: true };
        }
        if evals >= tols.max_evals {
            return Minimum { x: simplex[0].0.clone(), f: simplex[0].1, evals, converged: false };
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let xr = blend(&centroid, &worst.0, -1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = blend(&centroid, &worst.0, -2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = blend(&centroid, &xr, 0.5);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = blend(&centroid, &worst.0, 0.5);
            let fc = f(&xc);
            (xc, fc)
        };
        evals += 1;
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for p in simplex.iter_mut().skip(1) {
            p.0 = blend(&best, &p.0, 0.5);
            p.1 = f(&p.0);
            evals += 1;
        }
    }
}

/// Quantile of the χ² distribution with one degree of freedom, by bisection
/// on P(½, x/2).
pub fn chi2_quantile(level: f64) -> Result<f64, InferenceError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(InferenceError::InvalidInput(format!("level {level} not in (0, 1)")));
    }
    let cdf = |q: f64| regularized_gamma_p(0.5 * q, 0.5);
    let (mut lo, mut hi) = (0.0, 1.0);
    while cdf(hi)? < level {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid)? < level {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOLS: NmTols = NmTols { xtol: 1e-8, ftol: 1e-12, max_evals: 2000 };

    #[test]
    fn rosenbrock_minimum() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(f, &[-1.2, 1.0], &[0.1, 0.1], TOLS);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5, "{:?}", m.x);
    }

    #[test]
    fn one_dimensional_with_infeasible_region() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::INFINITY } else { (x[0] - 0.3).powi(2) };
        let m = nelder_mead(f, &[2.0], &[0.5], TOLS);
        assert!((m.x[0] - 0.3).abs() < 1e-6);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let f = |x: &[f64]| x[0] * x[0] + x[1] * x[1];
        let m = nelder_mead(f, &[5.0, 5.0], &[0.1, 0.1], NmTols { max_evals: 10, ..TOLS });
        assert!(!m.converged);
    }

    #[test]
    fn chi2_quantiles() {
        // standard normal: χ²₁(p) = z²_{(1+p)/2}
        assert!((chi2_quantile(0.95).unwrap() - 3.841_458_820_694_124).abs() < 1e-10);
        assert!((chi2_quantile(0.90).unwrap() - 2.705_543_454_095_404).abs() < 1e-10);
        assert!((chi2_quantile(0.5).unwrap() - 0.454_936_423_119_572_7).abs() < 1e-10);
        assert!(chi2_quantile(1.0).is_err());
    }
}
