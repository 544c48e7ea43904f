//! Time grids and covariance (Gram) matrices.

use super::closed::kernel_eval_closed;
use super::quad::{kernel_eval_quad, QuadMethod};
use super::{KernelError, KernelSpec};
use crate::quadrature::{QuadConfig, QuadError};
use nalgebra::{Cholesky, DMatrix, Dyn, SymmetricEigen};
use rayon::prelude::*;
use std::hash::{Hash, Hasher};

/// Partition 0 = t₀ < t₁ < … < tₙ.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid(Vec<f64>);

impl TimeGrid {
    /// `points` must start at 0 and increase strictly.
    pub fn new(points: Vec<f64>) -> Result<Self, KernelError> {
        if points.first() != Some(&0.0) {
            return Err(KernelError::InvalidParameter("time grid must start at 0".into()));
        }
        if points.len() < 2 {
            return Err(KernelError::InvalidParameter("time grid needs a positive point".into()));
        }
        if points.iter().any(|t| !t.is_finite()) || points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(KernelError::InvalidParameter(
                "time grid must be finite and strictly increasing".into(),
            ));
        }
        Ok(TimeGrid(points))
    }

    /// Grid from t₁, …, tₙ; t₀ = 0 is prepended.
    pub fn from_positive(times: &[f64]) -> Result<Self, KernelError> {
        let mut v = Vec::with_capacity(times.len() + 1);
        v.push(0.0);
        v.extend_from_slice(times);
        Self::new(v)
    }

    /// tₖ = kT/n.
    pub fn uniform(horizon: f64, n: usize) -> Result<Self, KernelError> {
        if !(horizon > 0.0) || n == 0 {
            return Err(KernelError::InvalidParameter(format!(
                "uniform grid needs T > 0 and n >= 1, got T={horizon}, n={n}"
            )));
        }
        Self::new((0..=n).map(|k| horizon * k as f64 / n as f64).collect())
    }

    /// All points including t₀ = 0.
    pub fn points(&self) -> &[f64] {
        &self.0
    }

    /// t₁, …, tₙ.
    pub fn positive(&self) -> &[f64] {
        &self.0[1..]
    }

    /// Number of positive points n.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn horizon(&self) -> f64 {
        *self.0.last().expect("grid is non-empty")
    }

    /// Δₖ = tₖ − tₖ₋₁, k = 1..n.
    pub fn deltas(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.windows(2).map(|w| w[1] - w[0])
    }

    /// Hash of the exact point values, for caches keyed by grid.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for t in &self.0 {
            t.to_bits().hash(&mut h);
        }
        h.finish()
    }
}

/// How a [`GramMatrix`] was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GramMethod {
    GaussKronrod,
    HAdaptive,
    PAdaptive,
    ClosedForm,
}

impl GramMethod {
    pub const ALL: [GramMethod; 4] = [
        GramMethod::GaussKronrod,
        GramMethod::HAdaptive,
        GramMethod::PAdaptive,
        GramMethod::ClosedForm,
    ];

    /// Method number 1–4.
    pub fn number(self) -> u8 {
        match self {
            GramMethod::GaussKronrod => 1,
            GramMethod::HAdaptive => 2,
            GramMethod::PAdaptive => 3,
            GramMethod::ClosedForm => 4,
        }
    }

    fn quad(self) -> Option<QuadMethod> {
        match self {
            GramMethod::GaussKronrod => Some(QuadMethod::GaussKronrod),
            GramMethod::HAdaptive => Some(QuadMethod::HAdaptive),
            GramMethod::PAdaptive => Some(QuadMethod::PAdaptive),
            GramMethod::ClosedForm => None,
        }
    }
}

impl TryFrom<u8> for GramMethod {
    type Error = KernelError;
    fn try_from(v: u8) -> Result<Self, KernelError> {
        GramMethod::ALL
            .into_iter()
            .find(|m| m.number() == v)
            .ok_or_else(|| KernelError::InvalidParameter(format!("method {v} not in 1..=4")))
    }
}

/// Symmetric positive-definite covariance matrix with its Cholesky factor.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    entries: DMatrix<f64>,
    method: GramMethod,
    jitter_applied: f64,
    unconverged: usize,
    chol: Cholesky<f64, Dyn>,
}

impl GramMatrix {
    /// Symmetrize, then certify positive definiteness by Cholesky, adding
    /// jitter δI with δ doubling from 10⁻¹²·max(1, trace/n) while δ ≤ 10⁻⁶·trace.
    pub fn validated(
        mut entries: DMatrix<f64>,
        method: GramMethod,
        unconverged: usize,
    ) -> Result<Self, KernelError> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(KernelError::InvalidParameter("Gram matrix must be square and non-empty".into()));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(KernelError::InvalidParameter("Gram matrix has non-finite entries".into()));
        }
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (entries[(i, j)] + entries[(j, i)]);
                entries[(i, j)] = v;
                entries[(j, i)] = v;
            }
        }
        let trace = entries.trace();
        if let Some(chol) = Cholesky::new(entries.clone()) {
            return Ok(GramMatrix { entries, method, jitter_applied: 0.0, unconverged, chol });
        }
        let cap = 1e-6 * trace.abs();
        let mut delta = 1e-12 * (trace.abs() / n as f64).max(1.0);
        while delta <= cap {
            let mut m = entries.clone();
            for i in 0..n {
                m[(i, i)] += delta;
            }
            if let Some(chol) = Cholesky::new(m.clone()) {
                return Ok(GramMatrix { entries: m, method, jitter_applied: delta, unconverged, chol });
            }
            delta *= 2.0;
        }
        Err(KernelError::NotPositiveDefinite { jitter: delta, trace })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Entries including any jitter on the diagonal.
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn method(&self) -> GramMethod {
        self.method
    }

    pub fn jitter_applied(&self) -> f64 {
        self.jitter_applied
    }

    /// Entries whose quadrature missed tolerance (best estimate used).
    pub fn unconverged(&self) -> usize {
        self.unconverged
    }

    pub fn cholesky(&self) -> &Cholesky<f64, Dyn> {
        &self.chol
    }

    /// ln det of the (jittered) matrix.
    pub fn ln_det(&self) -> f64 {
        2.0 * self.chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }
}

/// Gram matrix `[kernel(tᵢ, tⱼ)]` over t₁, …, tₙ.
pub fn gram(
    spec: &KernelSpec,
    grid: &TimeGrid,
    method: GramMethod,
    cfg: &QuadConfig,
) -> Result<GramMatrix, KernelError> {
    let (raw, unconverged) = gram_with(grid.positive(), |s, t| match method.quad() {
        Some(q) => kernel_eval_quad(spec, s, t, cfg, q),
        None => kernel_eval_closed(spec, s, t),
    })?;
    GramMatrix::validated(raw, method, unconverged)
}

/// Raw symmetric matrix `[k(tᵢ, tⱼ)]` from the lower triangle, evaluated in
/// parallel. Missed quadrature tolerances use the best estimate and are counted.
pub fn gram_with<K>(times: &[f64], k: K) -> Result<(DMatrix<f64>, usize), KernelError>
where
    K: Fn(f64, f64) -> Result<f64, KernelError> + Sync,
{
    let n = times.len();
    let rows: Vec<(Vec<f64>, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::with_capacity(i + 1);
            let mut missed = 0;
            for j in 0..=i {
                let v = match k(times[j], times[i]) {
                    Ok(v) => v,
                    Err(KernelError::Quadrature(QuadError::ToleranceNotReached { best })) => {
                        missed += 1;
                        best.value
                    }
                    Err(e) => return Err(e),
                };
                row.push(v);
            }
            Ok((row, missed))
        })
        .collect::<Result<_, KernelError>>()?;
    let mut m = DMatrix::zeros(n, n);
    let mut missed = 0;
    for (i, (row, miss)) in rows.into_iter().enumerate() {
        missed += miss;
        for (j, v) in row.into_iter().enumerate() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok((m, missed))
}
