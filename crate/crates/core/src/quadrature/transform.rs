//! Endpoint remapping for integrable power singularities.

use super::QuadError;


/// Power-type behaviour (u − lo)^α / (hi − u)^α at the interval ends.
///
/// A flagged end is remapped by u = lo + L·v^q with the smallest integer
/// q ≥ 2 for which q(1+α) − 1 ≥ 2: the flagged factor times the Jacobian
/// becomes v^{q(1+α)−1}, and smooth parts of the integrand stay polynomial
/// in v. Integer α needs no remapping.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EndpointSingularity {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl EndpointSingularity {
    pub const NONE: EndpointSingularity = EndpointSingularity { lo: None, hi: None };

    pub fn new(lo: Option<f64>, hi: Option<f64>) -> Self {
        EndpointSingularity { lo, hi }
    }

    pub fn at_lo(alpha: f64) -> Self {
        EndpointSingularity {
            lo: Some(alpha),
            hi: None,
        }
    }

    pub fn at_hi(alpha: f64) -> Self {
        EndpointSingularity {
            lo: None,
            hi: Some(alpha),
        }
    }
}

fn grading_power(alpha: Option<f64>) -> Result<Option<f64>, QuadError> {
    match alpha {
        None => Ok(None),
        Some(a) if !(a > -1.0) || !a.is_finite() => Err(QuadError::InvalidDomain(format!(
            "endpoint exponent {a} is not integrable"
        ))),
        Some(a) if a == a.floor() => Ok(None),
        Some(a) => Ok(Some((3.0 / (1.0 + a)).ceil().max(2.0))),
    }
}

/// Map from v ∈ [0, 1] onto part of the original interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Piece {
    Linear { lo: f64, len: f64 },
    /// u = anchor + dir·len·v^p; `guard` keeps u off the anchor itself.
    /// `span` is the length of the whole original interval.
    Graded { anchor: f64, dir: f64, len: f64, p: f64, guard: f64, span: f64 },
}

/// Quadrature node with its distances to the interval ends, which are exact
/// next to a flagged end where `hi − u` would lose digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub u: f64,
    pub to_lo: f64,
    pub to_hi: f64,
}

impl Piece {
    /// Node at v with the Jacobian; `None` where the Jacobian vanishes.
    #[inline]
    pub(crate) fn node(&self, v: f64) -> Option<(Node, f64)> {
        match *self {
            Piece::Linear { lo, len } => {
                let node = Node { u: lo + len * v, to_lo: len * v, to_hi: len * (1.0 - v) };
                Some((node, len))
            }
            Piece::Graded { anchor, dir, len, p, guard, span } => {
                if v <= 0.0 {
                    return None;
                }
                let w = v.powf(p - 1.0);
                let off = len * w * v;
                if off == 0.0 {
                    return None;
                }
                let u = anchor + dir * off.max(guard);
                let (to_lo, to_hi) = if dir > 0.0 { (off, span - off) } else { (span - off, off) };
                Some((Node { u, to_lo, to_hi }, len * p * w))
            }
        }
    }

    #[inline]
    pub(crate) fn map(&self, v: f64) -> (f64, f64) {
        self.node(v).map_or((0.0, 0.0), |(n, j)| (n.u, j))
    }

    #[inline]
    pub(crate) fn eval<F: Fn(Node) -> f64>(&self, v: f64, f: &F) -> f64 {
        self.node(v).map_or(0.0, |(n, j)| j * f(n))
    }
}

pub(crate) fn try_pieces(lo: f64, hi: f64, sing: EndpointSingularity) -> Result<Vec<Piece>, QuadError> {
    let pl = grading_power(sing.lo)?;
    let ph = grading_power(sing.hi)?;
    let guard = |anchor: f64| 4.0 * f64::EPSILON * anchor.abs() + f64::MIN_POSITIVE;
    let len = hi - lo;
    Ok(match (pl, ph) {
        (None, None) => vec![Piece::Linear { lo, len }],
        (Some(p), None) => vec![Piece::Graded {
            anchor: lo,
            dir: 1.0,
            len,
            p,
            guard: guard(lo),
            span: len,
        }],
        (None, Some(p)) => vec![Piece::Graded {
            anchor: hi,
            dir: -1.0,
            len,
            p,
            guard: guard(hi),
            span: len,
        }],
        (Some(p), Some(q)) => vec![
            Piece::Graded {
                anchor: lo,
                dir: 1.0,
                len: 0.5 * len,
                p,
                guard: guard(lo),
                span: len,
            },
            Piece::Graded {
                anchor: hi,
                dir: -1.0,
                len: 0.5 * len,
                p: q,
                guard: guard(hi),
                span: len,
            },
        ],
    })
}
