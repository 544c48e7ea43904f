//! Maximum-likelihood fit, profile-deviance intervals and AIC.

use super::likelihood::{loglik_cached, Dataset, Family, GramCache};
use super::optim::{chi2_quantile, nelder_mead, NmTols};
use super::InferenceError;
use crate::quadrature::QuadConfig;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Minimum number of observations for [`fit_mle`].
pub const MIN_OBSERVATIONS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    A,
    B,
}

/// Closed interval; an `*_at_edge` flag marks an end clipped to the search
/// rectangle before the deviance reached its threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_at_edge: bool,
    pub hi_at_edge: bool,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Profile-deviance interval with the profile points evaluated on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCi {
    pub param: Param,
    pub level: f64,
    pub interval: Interval,
    /// (θ, 2(ℓ̂ − ℓₚ(θ))) sorted by θ, including the MLE.
    pub curve: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub cfg: QuadConfig,
    /// Search range for a; the family default when `None`.
    pub a_range: Option<(f64, f64)>,
    pub b_range: (f64, f64),
    /// Grid nodes per parameter in the coarse search.
    pub grid_points: usize,
    /// Fix b instead of estimating it.
    pub pin_b: Option<f64>,
    /// Level of the profile intervals computed by the fit; `None` skips them.
    pub ci_level: Option<f64>,
    pub xtol: f64,
    pub ftol: f64,
    pub max_evals: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            cfg: QuadConfig::default(),
            a_range: None,
            b_range: (0.0, 2.0),
            grid_points: 21,
            pin_b: None,
            ci_level: Some(0.95),
            xtol: 1e-4,
            ftol: 1e-6,
            max_evals: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub family: Family,
    pub a_hat: f64,
    pub b_hat: f64,
    pub b_pinned: bool,
    pub loglik: f64,
    pub aic: f64,
    pub ci_a: Option<ProfileCi>,
    pub ci_b: Option<ProfileCi>,
    pub converged: bool,
    /// Likelihood evaluations, including grid search and profiles.
    pub evals: usize,
    pub warnings: Vec<String>,
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
}

impl FitResult {
    /// Number of estimated parameters.
    pub fn k(&self) -> usize {
        if self.b_pinned {
            1
        } else {
            2
        }
    }
}

/// 2k − 2ℓ̂.
pub fn aic(fit: &FitResult) -> f64 {
    2.0 * fit.k() as f64 - 2.0 * fit.loglik
}

/// Memoized log-likelihood over the search rectangle; failures count as −∞.
struct Objective<'a> {
    data: &'a Dataset,
    family: Family,
    cfg: QuadConfig,
    cache: &'a GramCache,
    memo: Mutex<HashMap<(u64, u64), f64>>,
    evals: AtomicUsize,
    a_range: (f64, f64),
    b_range: (f64, f64),
}

impl<'a> Objective<'a> {
    fn new(
        data: &'a Dataset,
        family: Family,
        cfg: QuadConfig,
        a_range: (f64, f64),
        b_range: (f64, f64),
        cache: &'a GramCache,
    ) -> Result<Self, InferenceError> {
        let finite = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite();
        if !finite(a_range) || !finite(b_range) || a_range.0 >= a_range.1 || b_range.0 > b_range.1 {
            return Err(InferenceError::InvalidInput("search ranges must be finite with lo < hi".into()));
        }
        if family == Family::C1 && a_range.0 <= -1.0 {
            return Err(InferenceError::InvalidInput("power-law a range must stay above -1".into()));
        }
        if b_range.0 < 0.0 || b_range.1 > 2.0 {
            return Err(InferenceError::InvalidInput("b range must lie in [0, 2]".into()));
        }
        Ok(Objective {
            data,
            family,
            cfg,
            cache,
            memo: Mutex::new(HashMap::new()),
            evals: AtomicUsize::new(0),
            a_range,
            b_range,
        })
    }

    fn inside(&self, a: f64, b: f64) -> bool {
        (self.a_range.0..=self.a_range.1).contains(&a) && (self.b_range.0..=self.b_range.1).contains(&b)
    }

    fn try_ll(&self, a: f64, b: f64) -> Result<f64, InferenceError> {
        let key = (a.to_bits(), b.to_bits());
        if let Some(v) = self.memo.lock().ok().and_then(|m| m.get(&key).copied()) {
            return Ok(v);
        }
        self.evals.fetch_add(1, Ordering::Relaxed);
        let v = loglik_cached(self.data, self.family, a, b, &self.cfg, self.cache)?;
        if let Ok(mut m) = self.memo.lock() {
            m.insert(key, v);
        }
        Ok(v)
    }

    fn ll(&self, a: f64, b: f64) -> f64 {
        if !self.inside(a, b) {
            return f64::NEG_INFINITY;
        }
        self.try_ll(a, b).unwrap_or(f64::NEG_INFINITY)
    }

    fn range(&self, p: Param) -> (f64, f64) {
        match p {
            Param::A => self.a_range,
            Param::B => self.b_range,
        }
    }
}

fn linspace((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// [`fit_mle_with`] using default options and a private cache.
pub fn fit_mle(data: &Dataset, family: Family) -> Result<FitResult, InferenceError> {
    fit_mle_with(data, family, &FitOptions::default(), &GramCache::default())
}

/// Grid search, Nelder–Mead refinement, then profile intervals at
/// `opts.ci_level`. A fit that fails to converge is returned with
/// `converged = false` and no intervals.
pub fn fit_mle_with(
    data: &Dataset,
    family: Family,
    opts: &FitOptions,
    cache: &GramCache,
) -> Result<FitResult, InferenceError> {
    if data.len() < MIN_OBSERVATIONS {
        return Err(InferenceError::InvalidInput(format!(
            "need at least {MIN_OBSERVATIONS} observations, got {}",
            data.len()
        )));
    }
    if opts.grid_points < 2 {
        return Err(InferenceError::InvalidInput("grid_points must be at least 2".into()));
    }
    if let Some(b) = opts.pin_b {
        if !(0.0..=2.0).contains(&b) {
            return Err(InferenceError::InvalidInput(format!("pinned b = {b} outside [0, 2]")));
        }
    }
    let a_range = opts.a_range.unwrap_or_else(|| family.default_a_range());
    let b_range = opts.pin_b.map_or(opts.b_range, |b| (b, b));
    let obj = Objective::new(data, family, opts.cfg, a_range, b_range, cache)?;
    let a_nodes = linspace(obj.a_range, opts.grid_points);
    let b_nodes = match opts.pin_b {
        Some(b) => vec![b],
        None => linspace(obj.b_range, opts.grid_points),
    };
    let cells: Vec<(f64, f64)> = a_nodes.iter().flat_map(|&a| b_nodes.iter().map(move |&b| (a, b))).collect();
    let values: Vec<Result<f64, InferenceError>> = cells.par_iter().map(|&(a, b)| obj.try_ll(a, b)).collect();
    let (best, best_ll) = cells
        .iter()
        .zip(&values)
        .filter_map(|(c, v)| v.as_ref().ok().map(|v| (*c, *v)))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or_else(|| values.iter().find_map(|v| v.clone().err()).expect("grid is non-empty"))?;

    let mut warnings = Vec::new();
    let mut result = FitResult {
        family,
        a_hat: best.0,
        b_hat: best.1,
        b_pinned: opts.pin_b.is_some(),
        loglik: best_ll,
        aic: 0.0,
        ci_a: None,
        ci_b: None,
        converged: false,
        evals: 0,
        warnings: Vec::new(),
        a_range: obj.a_range,
        b_range: obj.b_range,
    };
    if data.positive().iter().all(|&v| v == 0.0) {
        warnings.push("observations are identically zero; likelihood has no data term".into());
        result.aic = aic(&result);
        result.evals = obj.evals.load(Ordering::Relaxed);
        result.warnings = warnings;
        return Ok(result);
    }

    // step towards the interior from the best node
    let half = |nodes: &[f64], x: f64, (lo, hi): (f64, f64)| {
        let h = if nodes.len() > 1 { 0.5 * (nodes[1] - nodes[0]) } else { 0.05 * (hi - lo) };
        if x + h > hi {
            -h
        } else {
            h
        }
    };
    let tols = NmTols { xtol: opts.xtol, ftol: opts.ftol, max_evals: opts.max_evals };
    let m = match opts.pin_b {
        Some(b) => {
            let step = half(&a_nodes, best.0, obj.a_range);
            let m = nelder_mead(|x| -obj.ll(x[0], b), &[best.0], &[step], tols);
            (m.x[0], b, -m.f, m.converged)
        }
        None => {
            let steps = [half(&a_nodes, best.0, obj.a_range), half(&b_nodes, best.1, obj.b_range)];
            let m = nelder_mead(|x| -obj.ll(x[0], x[1]), &[best.0, best.1], &steps, tols);
            (m.x[0], m.x[1], -m.f, m.converged)
        }
    };
    let (a_hat, b_hat, ll_hat, converged) = if m.2 >= best_ll { m } else { (best.0, best.1, best_ll, m.3) };
    result.a_hat = a_hat;
    result.b_hat = b_hat;
    result.loglik = ll_hat;
    result.converged = converged;
    result.aic = aic(&result);
    if !converged {
        warnings.push(format!("Nelder-Mead stopped after {} evaluations", opts.max_evals));
    }
    let near = |x: f64, (lo, hi): (f64, f64)| (x - lo).abs() <= opts.xtol || (hi - x).abs() <= opts.xtol;
    if near(a_hat, obj.a_range) {
        warnings.push(format!("a_hat = {a_hat} is on the edge of the search range"));
    }
    if opts.pin_b.is_none() && near(b_hat, obj.b_range) {
        warnings.push(format!("b_hat = {b_hat} is on the edge of the search range"));
    }
    if let (Some(level), true) = (opts.ci_level, converged) {
        let ci_a = profile(&obj, &result, Param::A, level)?;
        warnings.extend(edge_warnings(&ci_a));
        result.ci_a = Some(ci_a);
        if opts.pin_b.is_none() {
            let ci_b = profile(&obj, &result, Param::B, level)?;
            warnings.extend(edge_warnings(&ci_b));
            result.ci_b = Some(ci_b);
        }
    }
    result.evals = obj.evals.load(Ordering::Relaxed);
    result.warnings = warnings;
    Ok(result)
}

fn edge_warnings(ci: &ProfileCi) -> Vec<String> {
    let name = match ci.param {
        Param::A => "a",
        Param::B => "b",
    };
    let mut w = Vec::new();
    if ci.interval.lo_at_edge {
        w.push(format!("interval for {name} reaches the lower search bound {}", ci.interval.lo));
    }
    if ci.interval.hi_at_edge {
        w.push(format!("interval for {name} reaches the upper search bound {}", ci.interval.hi));
    }
    w
}

/// [`profile_ci_with`] using default options and a private cache.
pub fn profile_ci(data: &Dataset, fit: &FitResult, which: Param, level: f64) -> Result<ProfileCi, InferenceError> {
    profile_ci_with(data, fit, which, level, &FitOptions::default(), &GramCache::default())
}

/// {θ : 2(ℓ̂ − ℓₚ(θ)) ≤ χ²₁(level)} around the MLE of `fit`, searched within
/// the fit's rectangle.
pub fn profile_ci_with(
    data: &Dataset,
    fit: &FitResult,
    which: Param,
    level: f64,
    opts: &FitOptions,
    cache: &GramCache,
) -> Result<ProfileCi, InferenceError> {
    if !fit.converged {
        return Err(InferenceError::NotConverged("profile intervals need a converged fit".into()));
    }
    let obj = Objective::new(data, fit.family, opts.cfg, fit.a_range, fit.b_range, cache)?;
    profile(&obj, fit, which, level)
}

fn profile(obj: &Objective, fit: &FitResult, which: Param, level: f64) -> Result<ProfileCi, InferenceError> {
    if which == Param::B && fit.b_pinned {
        return Err(InferenceError::InvalidInput("b is pinned; no profile for b".into()));
    }
    let q = chi2_quantile(level)?;
    let p = Profiler::new(obj, fit, which);
    let mut curve = vec![(p.theta_hat, 0.0)];
    let (lo, lo_edge) = p.side(-1.0, q, &mut curve);
    let (hi, hi_edge) = p.side(1.0, q, &mut curve);
    curve.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(ProfileCi {
        param: which,
        level,
        interval: Interval { lo, hi, lo_at_edge: lo_edge, hi_at_edge: hi_edge },
        curve,
    })
}

/// Profile log-likelihood ℓₚ(θ) = max_ψ ℓ(θ, ψ) with root finding on
/// √deviance, which is close to linear in θ near the MLE.
struct Profiler<'o, 'a> {
    obj: &'o Objective<'a>,
    which: Param,
    theta_hat: f64,
    psi_hat: f64,
    ll_hat: f64,
    pinned: bool,
}

impl<'o, 'a> Profiler<'o, 'a> {
    fn new(obj: &'o Objective<'a>, fit: &FitResult, which: Param) -> Self {
        let (theta_hat, psi_hat) = match which {
            Param::A => (fit.a_hat, fit.b_hat),
            Param::B => (fit.b_hat, fit.a_hat),
        };
        Profiler { obj, which, theta_hat, psi_hat, ll_hat: fit.loglik, pinned: fit.b_pinned }
    }

    fn ll(&self, theta: f64, psi: f64) -> f64 {
        match self.which {
            Param::A => self.obj.ll(theta, psi),
            Param::B => self.obj.ll(psi, theta),
        }
    }

    /// (argmax ψ, max ℓ) at fixed θ: repeated three-point parabolic steps.
    fn inner(&self, theta: f64, guess: f64) -> (f64, f64) {
        if self.pinned {
            return (self.psi_hat, self.ll(theta, self.psi_hat));
        }
        let (lo, hi) = self.obj.range(match self.which {
            Param::A => Param::B,
            Param::B => Param::A,
        });
        let h = 4e-3 * (hi - lo);
        let clamp = |x: f64| x.clamp(lo + h, hi - h);
        let mut c = clamp(guess);
        let mut best = (c, f64::NEG_INFINITY);
        for _ in 0..10 {
            let (fm, f0, fp) = (self.ll(theta, c - h), self.ll(theta, c), self.ll(theta, c + h));
            for (x, v) in [(c - h, fm), (c, f0), (c + h, fp)] {
                if v > best.1 {
                    best = (x, v);
                }
            }
            let curv = fp - 2.0 * f0 + fm;
            let next = if curv < 0.0 && curv.is_finite() {
                let d = 0.5 * h * (fm - fp) / curv;
                if d.abs() <= h {
                    let peak = f0 - (fp - fm).powi(2) / (8.0 * curv);
                    return (c + d, peak.max(best.1));
                }
                clamp(c + d.clamp(-4.0 * h, 4.0 * h))
            } else if fp > fm {
                clamp(c + 2.0 * h)
            } else {
                clamp(c - 2.0 * h)
            };
            if next == c {
                break;
            }
            c = next;
        }
        // maximum on the edge of the ψ range
        for x in [lo, hi] {
            if (x - best.0).abs() <= 2.0 * h {
                let v = self.ll(theta, x);
                if v > best.1 {
                    best = (x, v);
                }
            }
        }
        best
    }

    /// Endpoint where √deviance = √q in direction `dir`, and whether the
    /// search stopped at the range edge instead.
    fn side(&self, dir: f64, q: f64, curve: &mut Vec<(f64, f64)>) -> (f64, bool) {
        let (lo, hi) = self.obj.range(self.which);
        let edge = if dir > 0.0 { hi } else { lo };
        let sq = q.sqrt();
        let gtol = (0.5 * sq).min(1e-3);
        let xtol = 1e-6 * (hi - lo);
        if (edge - self.theta_hat).abs() <= xtol {
            return (edge, true);
        }
        let eval = |theta: f64, guess: f64, curve: &mut Vec<(f64, f64)>| {
            let (psi, pl) = self.inner(theta, guess);
            let dev = (2.0 * (self.ll_hat - pl)).max(0.0);
            curve.push((theta, dev));
            (psi, dev.sqrt() - sq)
        };
        // (θ, g, ψ) with g < 0 inside the interval, g > 0 outside
        let mut inside = [(self.theta_hat, -sq, self.psi_hat); 2];
        let mut outside: Option<(f64, f64, f64)> = None;
        let mut trial = self.theta_hat + dir * (0.01 * (hi - lo)).min((edge - self.theta_hat).abs());
        for _ in 0..60 {
            let guess = match outside {
                Some(o) => 0.5 * (inside[1].2 + o.2),
                None => inside[1].2,
            };
            let (psi, g) = eval(trial, guess, curve);
            if g.abs() <= gtol {
                return (trial, false);
            }
            if g < 0.0 {
                inside = [inside[1], (trial, g, psi)];
            } else {
                outside = Some((trial, g, psi));
            }
            let cur = inside[1];
            trial = match outside {
                Some(o) => {
                    if (o.0 - cur.0).abs() <= xtol {
                        return (0.5 * (o.0 + cur.0), false);
                    }
                    // false position, kept strictly inside the bracket
                    let t = cur.0 - cur.1 * (o.0 - cur.0) / (o.1 - cur.1);
                    let (a, b) = (cur.0.min(o.0), cur.0.max(o.0));
                    let margin = 0.02 * (b - a);
                    t.clamp(a + margin, b - margin)
                }
                None => {
                    if cur.0 == edge {
                        return (edge, true);
                    }
                    let prev = inside[0];
                    let slope = (cur.1 - prev.1) / (cur.0 - prev.0);
                    let t = if slope * dir > 0.0 {
                        cur.0 + 1.1 * (-cur.1 / slope)
                    } else {
                        cur.0 + 2.0 * (cur.0 - self.theta_hat)
                    };
                    if dir > 0.0 {
                        t.min(edge)
                    } else {
                        t.max(edge)
                    }
                }
            };
        }
        (trial, false)
    }
}
