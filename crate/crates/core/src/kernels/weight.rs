//! Weight functions f.

use super::KernelError;

/// The weight f in the kernel integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFn {
    /// u^a with a > −1.
    PowerLaw(f64),
    /// e^{au}.
    Exponential(f64),
    /// The constant c > 0.
    Constant(f64),
}

impl WeightFn {
    pub fn validate(&self) -> Result<(), KernelError> {
        match *self {
            WeightFn::PowerLaw(a) if !(a > -1.0) || !a.is_finite() => Err(
                KernelError::InvalidParameter(format!("power-law exponent a = {a} must be > -1")),
            ),
            WeightFn::Exponential(a) if !a.is_finite() => Err(KernelError::InvalidParameter(
                format!("exponential rate a = {a} must be finite"),
            )),
            WeightFn::Constant(c) if !(c > 0.0) || !c.is_finite() => Err(
                KernelError::InvalidParameter(format!("constant c = {c} must be > 0")),
            ),
            _ => Ok(()),
        }
    }

    /// f(u); u^a at 0 follows the limit from the right.
    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            WeightFn::PowerLaw(a) => {
                if a == 0.0 {
                    1.0
                } else if u == 0.0 {
                    if a > 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    u.powf(a)
                }
            }
            WeightFn::Exponential(a) => (a * u).exp(),
            WeightFn::Constant(c) => c,
        }
    }

    /// ∫₀ˣ f(u) du.
    pub fn mass(&self, x: f64) -> f64 {
        match *self {
            WeightFn::PowerLaw(a) => x.powf(a + 1.0) / (a + 1.0),
            WeightFn::Exponential(a) if a == 0.0 => x,
            WeightFn::Exponential(a) => (a * x).exp_m1() / a,
            WeightFn::Constant(c) => c * x,
        }
    }

    /// Exponent of the u^α behaviour at u = 0 when it needs special handling.
    pub(crate) fn origin_exponent(&self) -> Option<f64> {
        match *self {
            WeightFn::PowerLaw(a) if a != a.floor() => Some(a),
            _ => None,
        }
    }

    /// `(scale, base)` with `f = scale · base`, where base is a power law or a
    /// non-degenerate exponential.
    pub(crate) fn normalized(&self) -> (f64, WeightFn) {
        match *self {
            WeightFn::Constant(c) => (c, WeightFn::PowerLaw(0.0)),
            WeightFn::Exponential(a) if a == 0.0 => (1.0, WeightFn::PowerLaw(0.0)),
            w => (1.0, w),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_mass() {
        let w = WeightFn::PowerLaw(0.5);
        assert_eq!(w.eval(4.0), 2.0);
        assert!((w.mass(4.0) - 16.0 / 3.0).abs() < 1e-14);
        assert_eq!(WeightFn::PowerLaw(-0.5).eval(0.0), f64::INFINITY);
        let e = WeightFn::Exponential(-0.6);
        assert!((e.mass(2.0) - (1.0 - (-1.2f64).exp()) / 0.6).abs() < 1e-15);
        assert_eq!(WeightFn::Constant(2.5).mass(2.0), 5.0);
        assert_eq!(WeightFn::Exponential(0.0).mass(3.0), 3.0);
    }

    #[test]
    fn normalization() {
        assert_eq!(WeightFn::Constant(3.0).normalized(), (3.0, WeightFn::PowerLaw(0.0)));
        assert_eq!(WeightFn::Exponential(0.0).normalized(), (1.0, WeightFn::PowerLaw(0.0)));
        assert_eq!(WeightFn::PowerLaw(0.2).normalized(), (1.0, WeightFn::PowerLaw(0.2)));
    }
}
