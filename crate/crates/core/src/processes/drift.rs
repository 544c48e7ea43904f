//! Discrete drift statistics for an Ornstein–Uhlenbeck path.

use super::{PathSample, ProcessError};

/// `(β̂ₙ, β̃ₙ)` on a uniform grid with step Δ:
///
/// * `β̂ₙ = Σ V_{i−1}(V_i − V_{i−1}) / (Δ Σ V_{i−1}²)`
/// * `β̃ₙ = V_n² / (2Δ Σ V_{i−1}²)`
///
/// Under dV = −βV dt + σ dζ both target −β: β̂ₙ is the least-squares slope
/// of the drift, and β̃ₙ is consistent only in the explosive case β < 0.
/// Values are returned without sign changes.
pub fn ou_drift_estimators(path: &PathSample, delta: f64) -> Result<(f64, f64), ProcessError> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(ProcessError::InvalidParameter(format!("step {delta} must be > 0")));
    }
    let v = &path.values;
    if v.len() < 2 {
        return Err(ProcessError::DegeneratePath("need at least two points".into()));
    }
    let uniform = path
        .grid
        .deltas()
        .all(|d| (d - delta).abs() <= 1e-9 * delta.max(d));
    if !uniform {
        return Err(ProcessError::InvalidParameter(format!("grid is not uniform with step {delta}")));
    }
    let (cross, sq) = v
        .windows(2)
        .fold((0.0, 0.0), |(c, s), w| (c + w[0] * (w[1] - w[0]), s + w[0] * w[0]));
    if sq == 0.0 {
        return Err(ProcessError::DegeneratePath("Σ V_{i−1}² = 0".into()));
    }
    let vn = v[v.len() - 1];
    Ok((cross / (delta * sq), vn * vn / (2.0 * delta * sq)))
}
