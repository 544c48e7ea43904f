//! Gaussian path draws from a factorized covariance.

use super::ProcessError;
use crate::kernels::{GramMatrix, TimeGrid};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::sync::Arc;

/// One trajectory on a grid; `values[0]` is the value at t₀ = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub grid: Arc<TimeGrid>,
    pub values: Vec<f64>,
    pub seed: u64,
    pub path_id: u64,
}

impl PathSample {
    /// Pairs (tₖ, valueₖ), k = 0..=n.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().iter().copied().zip(self.values.iter().copied())
    }

    pub(crate) fn map_values(mut self, f: impl Fn(f64, f64) -> f64) -> Self {
        for (v, &t) in self.values.iter_mut().zip(self.grid.points()) {
            *v = f(t, *v);
        }
        self
    }
}

/// Zero-mean paths with covariance `gram` over the positive grid points,
/// using the Cholesky factor certified by the Gram validation.
pub fn sample_paths(
    gram: &GramMatrix,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<PathSample>, ProcessError> {
    if gram.dim() != grid.len() {
        return Err(ProcessError::InvalidParameter(format!(
            "Gram dimension {} does not match grid size {}",
            gram.dim(),
            grid.len()
        )));
    }
    Ok(sample_with_factor(&gram.cholesky().l(), grid, n_paths, seed))
}

/// Lower factor L with L·Lᵀ = cov: Cholesky, or the symmetric eigen
/// decomposition with tiny negative eigenvalues clipped when Cholesky fails.
pub fn factorize(cov: &DMatrix<f64>) -> Result<DMatrix<f64>, ProcessError> {
    if let Some(c) = cov.clone().cholesky() {
        return Ok(c.l());
    }
    let eig = SymmetricEigen::new(cov.clone());
    let top = eig.eigenvalues.amax();
    let floor = -1e-8 * top.max(f64::MIN_POSITIVE);
    if eig.eigenvalues.iter().any(|&l| l < floor) {
        return Err(ProcessError::Factorization(format!(
            "eigenvalue {:e} below tolerance {floor:e}",
            eig.eigenvalues.min()
        )));
    }
    let mut l = eig.eigenvectors;
    for (mut col, &lam) in l.column_iter_mut().zip(eig.eigenvalues.iter()) {
        col *= lam.max(0.0).sqrt();
    }
    Ok(l)
}

/// Paths `x = L·z` with z standard normal; path p draws from stream p.
pub fn sample_with_factor(
    factor: &DMatrix<f64>,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Vec<PathSample> {
    let grid = Arc::new(grid.clone());
    let n = factor.nrows();
    let lower = is_lower(factor);
    (0..n_paths as u64)
        .into_par_iter()
        .map(|path_id| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(path_id);
            let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let mut values = Vec::with_capacity(n + 1);
            values.push(0.0);
            values.extend((0..n).map(|i| {
                let cols = if lower { i + 1 } else { n };
                (0..cols).map(|k| factor[(i, k)] * z[k]).sum::<f64>()
            }));
            PathSample { grid: Arc::clone(&grid), values, seed, path_id }
        })
        .collect()
}

fn is_lower(m: &DMatrix<f64>) -> bool {
    (0..m.nrows()).all(|i| (i + 1..m.ncols()).all(|k| m[(i, k)] == 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{gram, GramMethod, KernelSpec, WeightFn};
    use crate::quadrature::QuadConfig;

    fn brownian(grid: &TimeGrid) -> GramMatrix {
        let spec = KernelSpec::weighted(WeightFn::PowerLaw(0.0), 0.0).unwrap();
        gram(&spec, grid, GramMethod::ClosedForm, &QuadConfig::default()).unwrap()
    }

    #[test]
    fn empty_and_deterministic() {
        let grid = TimeGrid::from_positive(&[1.0, 2.0, 3.0]).unwrap();
        let g = brownian(&grid);
        assert!(sample_paths(&g, &grid, 0, 1).unwrap().is_empty());
        let a = sample_paths(&g, &grid, 5, 42).unwrap();
        let b = sample_paths(&g, &grid, 5, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0].values, a[1].values);
        assert_ne!(a, sample_paths(&g, &grid, 5, 43).unwrap());
        assert!(a.iter().all(|p| p.values.len() == 4 && p.values[0] == 0.0));
    }

    #[test]
    fn path_streams_are_prefix_stable() {
        let grid = TimeGrid::from_positive(&[1.0, 2.0]).unwrap();
        let g = brownian(&grid);
        let few = sample_paths(&g, &grid, 3, 7).unwrap();
        let many = sample_paths(&g, &grid, 10, 7).unwrap();
        assert_eq!(few[..], many[..3]);
    }

    #[test]
    fn brownian_variance() {
        let grid = TimeGrid::from_positive(&[1.0, 2.0, 3.0]).unwrap();
        let paths = sample_paths(&brownian(&grid), &grid, 100_000, 2024).unwrap();
        let n = paths.len() as f64;
        let var = paths.iter().map(|p| p.values[2].powi(2)).sum::<f64>() / n;
        // se of the second moment of N(0, 2) is 2·√2/√n
        let se = 2.0 * 2f64.sqrt() / n.sqrt();
        assert!((var - 2.0).abs() < 3.0 * se, "{var}");
    }

    #[test]
    fn eigen_fallback_for_singular_covariance() {
        let v = nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let cov = &v * v.transpose();
        let l = factorize(&cov).unwrap();
        assert!((&l * l.transpose() - &cov).amax() < 1e-12);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(factorize(&bad).is_err());
    }
}
