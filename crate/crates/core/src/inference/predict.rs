//! Conditional (kriging) prediction and mean squared error.

use super::fit::FitResult;
use super::likelihood::{kernel_spec, model_gram, model_kernel, Dataset};
use super::InferenceError;
use crate::kernels::{KernelSpec, TimeGrid};
use crate::quadrature::QuadConfig;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Lower and upper quantiles of the simulated band.
pub const BAND: (f64, f64) = (0.025, 0.975);

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub times: Vec<f64>,
    /// Conditional mean Σ₂₁Σ₁₁⁻¹x.
    pub mean: Vec<f64>,
    /// Conditional standard deviation.
    pub sd: Vec<f64>,
    /// Conditional draws, one vector over `times` per simulation.
    pub sims: Vec<Vec<f64>>,
    /// Pointwise [`BAND`] quantiles of the draws; empty without draws.
    pub band: Vec<(f64, f64)>,
}

/// Prediction under the fitted kernel with the default quadrature settings.
pub fn predict(
    data: &Dataset,
    fit: &FitResult,
    horizon: &[f64],
    n_sims: usize,
    seed: u64,
) -> Result<Prediction, InferenceError> {
    let spec = kernel_spec(fit.family, fit.a_hat, fit.b_hat)?;
    predict_with(data, &spec, horizon, n_sims, seed, &QuadConfig::default())
}

/// Law of the process at `horizon` given the observations; draw `i` uses
/// stream `i` of the generator seeded with `seed`.
pub fn predict_with(
    data: &Dataset,
    spec: &KernelSpec,
    horizon: &[f64],
    n_sims: usize,
    seed: u64,
    cfg: &QuadConfig,
) -> Result<Prediction, InferenceError> {
    let last = data.grid().horizon();
    if horizon.iter().any(|&t| !(t > last) || !t.is_finite()) {
        return Err(InferenceError::InvalidInput(format!(
            "horizon times must be finite and after the last observation at {last}"
        )));
    }
    if horizon.windows(2).any(|w| w[1] <= w[0]) {
        return Err(InferenceError::InvalidInput("horizon times must increase".into()));
    }
    if horizon.is_empty() {
        return Ok(Prediction { times: vec![], mean: vec![], sd: vec![], sims: vec![], band: vec![] });
    }
    let obs = data.grid().positive();
    let s11 = model_gram(spec, data.grid(), cfg)
        .map_err(|e| InferenceError::Singular(format!("observed block: {e}")))?;
    let m = horizon.len();
    let mut s21 = DMatrix::zeros(m, obs.len());
    for (i, &t) in horizon.iter().enumerate() {
        for (j, &s) in obs.iter().enumerate() {
            s21[(i, j)] = model_kernel(spec, s, t, cfg)?;
        }
    }
    let mut s22 = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = model_kernel(spec, horizon[j], horizon[i], cfg)?;
            s22[(i, j)] = v;
            s22[(j, i)] = v;
        }
    }
    let chol = s11.cholesky();
    let alpha = chol.solve(&DVector::from_column_slice(data.positive()));
    let mean = &s21 * alpha;
    // Σ₂₂ − (L⁻¹Σ₁₂)ᵀ(L⁻¹Σ₁₂)
    let w = chol
        .l_dirty()
        .solve_lower_triangular(&s21.transpose())
        .ok_or_else(|| InferenceError::Singular("zero pivot in observed block".into()))?;
    let scale = s22.diagonal().amax();
    let mut cond = s22 - w.transpose() * w;
    cond = 0.5 * (&cond + cond.transpose());
    let sd = cond.diagonal().iter().map(|v| v.max(0.0).sqrt()).collect();
    let sims = if n_sims == 0 {
        vec![]
    } else {
        let factor = cond_factor(&cond, scale)?;
        draws(&factor, mean.as_slice(), n_sims, seed)
    };
    let band = (0..m)
        .map(|k| {
            let mut col: Vec<f64> = sims.iter().map(|s| s[k]).collect();
            col.sort_by(f64::total_cmp);
            (quantile(&col, BAND.0), quantile(&col, BAND.1))
        })
        .filter(|b| b.0.is_finite())
        .collect();
    Ok(Prediction { times: horizon.to_vec(), mean: mean.as_slice().to_vec(), sd, sims, band })
}

/// Horizon continuing the observation grid with its last spacing.
pub fn extend_grid(grid: &TimeGrid, steps: usize) -> Vec<f64> {
    let p = grid.points();
    let h = p[p.len() - 1] - p[p.len() - 2];
    (1..=steps).map(|k| grid.horizon() + h * k as f64).collect()
}

/// Square root of the conditional covariance by eigen decomposition, with
/// rounding-level negative eigenvalues (relative to the unconditional
/// variance `scale`) set to zero.
fn cond_factor(cond: &DMatrix<f64>, scale: f64) -> Result<DMatrix<f64>, InferenceError> {
    let eig = SymmetricEigen::new(cond.clone());
    let floor = -1e-8 * scale;
    if let Some(l) = eig.eigenvalues.iter().find(|&&l| l < floor) {
        return Err(InferenceError::Singular(format!("conditional covariance eigenvalue {l:e}")));
    }
    let mut f = eig.eigenvectors;
    for (mut col, &lam) in f.column_iter_mut().zip(eig.eigenvalues.iter()) {
        col *= lam.max(0.0).sqrt();
    }
    Ok(f)
}

fn draws(factor: &DMatrix<f64>, mean: &[f64], n_sims: usize, seed: u64) -> Vec<Vec<f64>> {
    let m = mean.len();
    (0..n_sims as u64)
        .into_par_iter()
        .map(|id| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(id);
            let z: Vec<f64> = (0..factor.ncols()).map(|_| rng.sample(StandardNormal)).collect();
            (0..m)
                .map(|i| mean[i] + (0..factor.ncols()).map(|k| factor[(i, k)] * z[k]).sum::<f64>())
                .collect()
        })
        .collect()
}

/// Linear-interpolation quantile of sorted data; NaN when empty.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let x = p * (sorted.len() - 1) as f64;
    let (i, frac) = (x.floor() as usize, x - x.floor());
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + frac * (sorted[j] - sorted[i])
}

/// Mean of squared differences.
pub fn mse(pred: &[f64], actual: &[f64]) -> Result<f64, InferenceError> {
    if pred.len() != actual.len() {
        return Err(InferenceError::InvalidInput(format!(
            "length mismatch: {} predictions, {} observations",
            pred.len(),
            actual.len()
        )));
    }
    if pred.is_empty() {
        return Err(InferenceError::InvalidInput("mse of empty vectors".into()));
    }
    Ok(pred.iter().zip(actual).map(|(p, a)| (p - a).powi(2)).sum::<f64>() / pred.len() as f64)
}
