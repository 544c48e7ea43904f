//! Wynn's epsilon algorithm for accelerating a sequence of partial results.

/// Extrapolated limit of `seq` with a crude error estimate, using at most the
/// last 50 terms. Needs at least three terms.
pub(crate) fn extrapolate(seq: &[f64]) -> Option<(f64, f64)> {
    let s = &seq[seq.len().saturating_sub(50)..];
    let n = s.len();
    if n < 3 {
        return None;
    }
    // columns of the epsilon table; even columns hold the estimates
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut estimates: Vec<f64> = vec![s[n - 1]];
    for col in 1..n {
        let len = n - col;
        let mut next = Vec::with_capacity(len);
        for k in 0..len {
            let diff = cur[k + 1] - cur[k];
            if diff == 0.0 || !diff.is_finite() {
                // converged (or broken) column: keep the latest even-column value
                let value = if (col - 1) % 2 == 0 {
                    cur[k + 1]
                } else {
                    *estimates.last().unwrap()
                };
                return finish(&estimates, value);
            }
            next.push(prev[k + 1] + 1.0 / diff);
        }
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            estimates.push(*cur.last().unwrap());
        }
    }
    let last = *estimates.last().unwrap();
    finish(&estimates, last)
}

fn finish(estimates: &[f64], value: f64) -> Option<(f64, f64)> {
    if !value.is_finite() {
        return None;
    }
    let err = estimates
        .iter()
        .rev()
        .skip(1)
        .take(2)
        .map(|e| (e - value).abs())
        .fold(0.0, f64::max);
    let err = if estimates.len() < 2 { value.abs() } else { err };
    Some((value, err))
}
