//! Ornstein–Uhlenbeck process dV = −βV dt + σ dζ.
//!
//! The covariance H on t₁ < … < tₙ is assembled from integrals over the
//! grid cells [tₖ₋₁, tₖ]. With `B(i,k) = e^{−β(tᵢ−tₖ)}` for k ≤ i:
//!
//! * b ∈ (1,2]: `H = σ²b·B·G·Bᵀ`,
//!   `G(k,l) = ∫₀^{Δₖ}∫₀^{Δₗ} e^{−βu} C_{f,b}(tₖ−u, tₗ−v) e^{−βv} dv du`;
//! * b ∈ (0,1) and the log-kernel: `H = σ²[R − β(BD + (BD)ᵀ) + β²·B·G·Bᵀ]`,
//!   `D(k,j) = ∫₀^{Δₖ} e^{−βu} R(tₖ−u, tⱼ) du` and G as above with R for C;
//! * b = 0 (Itô isometry): `H(tᵢ,tⱼ) = σ² e^{−β(tⱼ−tᵢ)} Aᵢ` for i ≤ j, where
//!   `Aᵢ = Σ_{k≤i} e^{−2β(tᵢ−tₖ)} ∫₀^{Δₖ} e^{−2βu} f(tₖ−u) du`.

use super::sample::sample_paths;
use super::{PathSample, ProcessError};
use crate::kernels::{
    gram_with, kernel_eval_closed, nu_cov_closed, GramMatrix, GramMethod, KernelError,
    KernelSpec, Shape, TimeGrid,
};
use crate::quadrature::{integrate_1d_nodes, integrate_1d_singular, EndpointSingularity, QuadConfig, QuadError};
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::cell::{Cell, RefCell};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OUSpec {
    pub kernel: KernelSpec,
    /// Mean-reversion rate (1/time); any sign.
    pub beta: f64,
    pub sigma: f64,
    pub v0: f64,
}

impl OUSpec {
    pub fn new(kernel: KernelSpec, beta: f64, sigma: f64, v0: f64) -> Result<Self, ProcessError> {
        let spec = OUSpec { kernel, beta, sigma, v0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ProcessError> {
        self.kernel.validate()?;
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(ProcessError::InvalidParameter(format!("sigma = {} must be > 0", self.sigma)));
        }
        if !self.beta.is_finite() || !self.v0.is_finite() {
            return Err(ProcessError::InvalidParameter("beta and v0 must be finite".into()));
        }
        Ok(())
    }

    /// E[V_t] = e^{−βt} V₀.
    pub fn mean(&self, t: f64) -> f64 {
        (-self.beta * t).exp() * self.v0
    }
}

/// Covariance of (V_{t₁}, …, V_{tₙ}) given V₀, PSD-validated.
pub fn ou_gram(spec: &OUSpec, grid: &TimeGrid, cfg: &QuadConfig) -> Result<GramMatrix, ProcessError> {
    spec.validate()?;
    let (h, missed) = ou_cov(spec, grid, cfg)?;
    Ok(GramMatrix::validated(h, GramMethod::ClosedForm, missed)?)
}

/// Paths m(t) + N(0, H) with m(t) = e^{−βt}V₀.
pub fn ou_sample(
    spec: &OUSpec,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
    cfg: &QuadConfig,
) -> Result<Vec<PathSample>, ProcessError> {
    let h = ou_gram(spec, grid, cfg)?;
    Ok(sample_paths(&h, grid, n_paths, seed)?
        .into_iter()
        .map(|p| p.map_values(|t, x| spec.mean(t) + x))
        .collect())
}

/// Raw covariance and the number of cell integrals that missed tolerance.
pub(crate) fn ou_cov(
    spec: &OUSpec,
    grid: &TimeGrid,
    cfg: &QuadConfig,
) -> Result<(DMatrix<f64>, usize), ProcessError> {
    let s2 = spec.sigma * spec.sigma;
    let kernel = spec.kernel;
    match kernel.effective_shape() {
        Shape::Weighted(b) if b == 0.0 => brownian_cov(spec, grid, cfg),
        Shape::Weighted(b) if b > 1.0 => {
            let cells = Cells::new(grid, spec.beta, kernel, b - 1.0, cfg);
            let (g, missed) = cells.g_matrix(&|x, y| nu_cov_closed(&kernel, x, y))?;
            let bm = block(grid, spec.beta);
            Ok((&bm * g * bm.transpose() * (s2 * b), missed))
        }
        shape => {
            // R has a |t−s|^{b+1} cusp on the diagonal; x² ln x for the log-kernel
            let cusp = match shape {
                Shape::Weighted(b) => b + 1.0,
                Shape::LogKernel => 1.5,
            };
            let k = |x: f64, y: f64| kernel_eval_closed(&kernel, x, y);
            let cells = Cells::new(grid, spec.beta, kernel, cusp, cfg);
            let (r, m0) = gram_with(grid.positive(), k)?;
            let (d, m1) = cells.d_matrix(&k)?;
            let (g, m2) = cells.g_matrix(&k)?;
            let bm = block(grid, spec.beta);
            let bd = &bm * d;
            let beta = spec.beta;
            let h = (r - (&bd + bd.transpose()) * beta + &bm * g * bm.transpose() * (beta * beta)) * s2;
            Ok((h, m0 + m1 + m2))
        }
    }
}

/// B(i,k) = e^{−β(tᵢ−tₖ)} for k ≤ i, else 0.
fn block(grid: &TimeGrid, beta: f64) -> DMatrix<f64> {
    let t = grid.positive();
    DMatrix::from_fn(t.len(), t.len(), |i, k| if k <= i { (-beta * (t[i] - t[k])).exp() } else { 0.0 })
}

fn brownian_cov(
    spec: &OUSpec,
    grid: &TimeGrid,
    cfg: &QuadConfig,
) -> Result<(DMatrix<f64>, usize), ProcessError> {
    let (scale, w) = spec.kernel.weight.normalized();
    let beta = spec.beta;
    let pts = grid.points();
    let n = grid.len();
    let mut missed = 0;
    let mut acc = Vec::with_capacity(n);
    let mut a = 0.0;
    for k in 1..=n {
        let (before, dk) = (pts[k - 1], pts[k] - pts[k - 1]);
        let hi = if k == 1 { flag(w.origin_exponent()) } else { None };
        let cell = integrate_1d_nodes(
            |p| (-2.0 * beta * p.u).exp() * w.eval(before + p.to_hi),
            0.0,
            dk,
            EndpointSingularity::new(None, hi),
            cfg,
        );
        let cell = match cell {
            Ok(r) => r.value,
            Err(QuadError::ToleranceNotReached { best }) => {
                missed += 1;
                best.value
            }
            Err(e) => return Err(KernelError::from(e).into()),
        };
        a = (-2.0 * beta * dk).exp() * a + scale * cell;
        acc.push(a);
    }
    let t = grid.positive();
    let s2 = spec.sigma * spec.sigma;
    let h = DMatrix::from_fn(n, n, |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        s2 * (-beta * (t[hi] - t[lo])).exp() * acc[lo]
    });
    Ok((h, missed))
}

/// Non-integer exponents only; integer powers need no endpoint grading.
fn flag(alpha: Option<f64>) -> Option<f64> {
    alpha.filter(|a| a.fract() != 0.0)
}

/// Stronger of two endpoint flags.
fn both(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (flag(a), flag(b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// Cell integrals over a grid.
struct Cells {
    t: Vec<f64>,
    d: Vec<f64>,
    beta: f64,
    /// Exponent of the kernel's cusp along the diagonal.
    cusp: f64,
    /// Exponent of the kernel's behaviour at time 0.
    origin: Option<f64>,
    outer: QuadConfig,
    inner: QuadConfig,
}

type Kern<'k> = dyn Fn(f64, f64) -> Result<f64, KernelError> + Sync + 'k;

/// Runs an integrand that may fail, recording the first failure.
struct Guard {
    err: RefCell<Option<KernelError>>,
    missed: Cell<bool>,
}

impl Guard {
    fn new() -> Self {
        Guard { err: RefCell::new(None), missed: Cell::new(false) }
    }

    fn value(&self, r: Result<f64, KernelError>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.err.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    }

    fn quad(&self, r: Result<crate::quadrature::QuadResult, QuadError>) -> f64 {
        match r {
            Ok(r) => r.value,
            Err(QuadError::ToleranceNotReached { best }) => {
                self.missed.set(true);
                best.value
            }
            Err(e) => self.value(Err(e.into())),
        }
    }

    fn finish(self, v: f64) -> Result<(f64, bool), KernelError> {
        match self.err.into_inner() {
            Some(e) => Err(e),
            None => Ok((v, self.missed.get())),
        }
    }
}

impl Cells {
    fn new(grid: &TimeGrid, beta: f64, kernel: KernelSpec, cusp: f64, cfg: &QuadConfig) -> Self {
        let (_, w) = kernel.weight.normalized();
        let inner = QuadConfig { abs_tol: 0.1 * cfg.abs_tol, rel_tol: 0.1 * cfg.rel_tol, ..*cfg };
        Cells {
            t: grid.positive().to_vec(),
            d: grid.deltas().collect(),
            beta,
            cusp,
            origin: w.origin_exponent().map(|a| a + 1.0),
            outer: *cfg,
            inner,
        }
    }

    /// `D(k,j) = ∫₀^{Δₖ} e^{−βu} k(tₖ−u, tⱼ) du` for all k, j.
    fn d_matrix(&self, k: &Kern) -> Result<(DMatrix<f64>, usize), KernelError> {
        let n = self.t.len();
        let cells: Vec<(f64, bool)> = (0..n * n)
            .into_par_iter()
            .map(|idx| self.d_cell(idx / n, idx % n, k))
            .collect::<Result<_, _>>()?;
        let missed = cells.iter().filter(|c| c.1).count();
        Ok((DMatrix::from_fn(n, n, |i, j| cells[i * n + j].0), missed))
    }

    fn d_cell(&self, i: usize, j: usize, k: &Kern) -> Result<(f64, bool), KernelError> {
        let (ti, di, tj) = (self.t[i], self.d[i], self.t[j]);
        let lo = if j == i { flag(Some(self.cusp)) } else { None };
        let hi = both(
            if j + 1 == i { Some(self.cusp) } else { None },
            if i == 0 { self.origin } else { None },
        );
        let g = Guard::new();
        let r = integrate_1d_singular(
            |u| (-self.beta * u).exp() * g.value(k(ti - u, tj)),
            0.0,
            di,
            EndpointSingularity::new(lo, hi),
            &self.outer,
        );
        let v = g.quad(r);
        g.finish(v)
    }

    /// Symmetric `G(k,l) = ∫∫ e^{−βu} k(tₖ−u, tₗ−v) e^{−βv} dv du`.
    fn g_matrix(&self, k: &Kern) -> Result<(DMatrix<f64>, usize), KernelError> {
        let n = self.t.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
        let cells: Vec<(f64, bool)> = pairs
            .par_iter()
            .map(|&(i, j)| self.g_cell(i, j, k))
            .collect::<Result<_, _>>()?;
        let mut g = DMatrix::zeros(n, n);
        for (&(i, j), &(v, _)) in pairs.iter().zip(&cells) {
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
        Ok((g, cells.iter().filter(|c| c.1).count()))
    }

    fn g_cell(&self, i: usize, j: usize, k: &Kern) -> Result<(f64, bool), KernelError> {
        let (ti, di, tj, dj) = (self.t[i], self.d[i], self.t[j], self.d[j]);
        let beta = self.beta;
        let cusp = Some(self.cusp);
        let edge = Some(self.cusp + 1.0);
        // the diagonal of the kernel is the line v = u + (tⱼ − tᵢ)
        let shift = tj - ti;
        let v_origin = if j == 0 { self.origin } else { None };
        let g = Guard::new();
        let piece = |x: f64, lo: f64, hi: f64, sing: EndpointSingularity| -> f64 {
            if !(hi > lo) {
                return 0.0;
            }
            let r = integrate_1d_singular(
                |v| (-beta * v).exp() * g.value(k(x, tj - v)),
                lo,
                hi,
                sing,
                &self.inner,
            );
            g.quad(r)
        };
        let inner = |u: f64| -> f64 {
            let x = ti - u;
            let w = (-beta * u).exp();
            if i == j {
                let vs = u + shift;
                w * (piece(x, 0.0, vs, EndpointSingularity::new(None, flag(cusp)))
                    + piece(x, vs, dj, EndpointSingularity::new(flag(cusp), both(None, v_origin))))
            } else {
                let lo = if j + 1 == i { flag(cusp) } else { None };
                let hi = both(if i + 1 == j { cusp } else { None }, v_origin);
                w * piece(x, 0.0, dj, EndpointSingularity::new(lo, hi))
            }
        };
        let lo = if i == j || i + 1 == j { flag(edge) } else { None };
        let hi = both(
            if i == j || j + 1 == i { edge } else { None },
            if i == 0 { self.origin } else { None },
        );
        let r = integrate_1d_singular(inner, 0.0, di, EndpointSingularity::new(lo, hi), &self.outer);
        let v = g.quad(r);
        g.finish(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::WeightFn;

    fn ou(w: WeightFn, b: f64, beta: f64, sigma: f64) -> OUSpec {
        OUSpec::new(KernelSpec::weighted(w, b).unwrap(), beta, sigma, 0.0).unwrap()
    }

    #[test]
    fn brownian_closed_form() {
        let (beta, sigma) = (0.7, 1.3);
        let spec = ou(WeightFn::Constant(1.0), 0.0, beta, sigma);
        let grid = TimeGrid::from_positive(&[0.3, 1.0, 1.7, 2.5, 4.0]).unwrap();
        let h = ou_gram(&spec, &grid, &QuadConfig::default()).unwrap();
        let t = grid.positive();
        for i in 0..5 {
            for j in 0..5 {
                let m = t[i].min(t[j]);
                let want = sigma * sigma * (-beta * (t[i] + t[j])).exp() * (2.0 * beta * m).exp_m1()
                    / (2.0 * beta);
                assert!((h.entries()[(i, j)] - want).abs() < 1e-8, "({i},{j})");
            }
        }
    }

    #[test]
    fn sigma_scaling() {
        let grid = TimeGrid::uniform(2.0, 4).unwrap();
        let cfg = QuadConfig::default();
        for b in [0.4, 1.5] {
            let h1 = ou_gram(&ou(WeightFn::PowerLaw(0.3), b, 0.5, 1.0), &grid, &cfg).unwrap();
            let h3 = ou_gram(&ou(WeightFn::PowerLaw(0.3), b, 0.5, 3.0), &grid, &cfg).unwrap();
            let diff = (h3.entries() - h1.entries() * 9.0).amax();
            assert!(diff < 1e-9 * h3.entries().amax(), "b={b}: {diff}");
        }
    }

    #[test]
    fn zero_beta_reduces_to_kernel() {
        let grid = TimeGrid::uniform(3.0, 5).unwrap();
        let cfg = QuadConfig::default();
        for b in [0.6, 1.4] {
            let spec = ou(WeightFn::Exponential(-0.3), b, 0.0, 2.0);
            let h = ou_gram(&spec, &grid, &cfg).unwrap();
            let t = grid.positive();
            for i in 0..5 {
                for j in 0..5 {
                    let r = 4.0 * kernel_eval_closed(&spec.kernel, t[i], t[j]).unwrap();
                    assert!((h.entries()[(i, j)] - r).abs() < 1e-7, "b={b} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn deterministic_decay() {
        let spec = OUSpec::new(KernelSpec::weighted(WeightFn::PowerLaw(0.0), 1.5).unwrap(), 0.8, 1e-8, 5.0).unwrap();
        let grid = TimeGrid::uniform(2.0, 6).unwrap();
        let paths = ou_sample(&spec, &grid, 3, 9, &QuadConfig::default()).unwrap();
        for p in &paths {
            for (t, v) in p.iter() {
                assert!((v - 5.0 * (-0.8 * t).exp()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn invalid_sigma() {
        let k = KernelSpec::weighted(WeightFn::PowerLaw(0.0), 0.5).unwrap();
        assert!(OUSpec::new(k, 1.0, 0.0, 0.0).is_err());
        assert!(OUSpec::new(k, f64::NAN, 1.0, 0.0).is_err());
    }
}
