//! Modified Bessel function of the second kind K_ν(x), real order.
//!
//! Temme's series for x < 2 and Steed's continued fraction otherwise,
//! evaluated at the reduced order μ = ν − round(ν) and carried up by the
//! forward recurrence, which is stable for K.

use super::{SpecFunError, EPS, MAX_ITER};
use std::f64::consts::PI;

/// Coefficients of 1/Γ(z) = Σ c_k z^k (c₁ = 1).
const RGAMMA_COEF: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// Temme's auxiliary values for |μ| ≤ 1/2:
/// γ₁ = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ), γ₂ = (1/Γ(1−μ) + 1/Γ(1+μ))/2,
/// together with 1/Γ(1+μ) and 1/Γ(1−μ).
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    // 1/Γ(1+z) = Σ c_{k} z^{k−1}; split into even and odd powers of μ
    let mut g1 = 0.0;
    let mut g2 = 0.0;
    let mut p = 1.0;
    for pair in RGAMMA_COEF.chunks(2) {
        g2 += pair[0] * p;
        if let Some(c) = pair.get(1) {
            g1 -= c * p;
        }
        p *= mu2;
    }
    let gampl = g2 - mu * g1;
    let gammi = g2 + mu * g1;
    (g1, g2, gampl, gammi)
}

/// 𝒦_κ(x) for x > 0. Negative orders use 𝒦_{−κ} = 𝒦_κ.
pub fn bessel_k(kappa: f64, x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) || !x.is_finite() || !kappa.is_finite() {
        return Err(SpecFunError::domain("bessel_k", format!("need x > 0, got x = {x}")));
    }
    let nu = kappa.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let (mut rkmu, mut rk1);
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SpecFunError::NonConvergence {
                func: "bessel_k",
                terms: MAX_ITER,
            });
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SpecFunError::NonConvergence {
                func: "bessel_k",
                terms: MAX_ITER,
            });
        }
        h *= a1;
        rkmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        rk1 = rkmu * (mu + x + 0.5 - h) * xi;
    }
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
        if !rk1.is_finite() {
            return Err(SpecFunError::Overflow { func: "bessel_k" });
        }
    }
    if !rkmu.is_finite() {
        return Err(SpecFunError::Overflow { func: "bessel_k" });
    }
    Ok(rkmu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_order() {
        for &x in &[0.1, 1.0, 1.9, 2.1, 7.5] {
            let want = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!((bessel_k(0.5, x).unwrap() / want - 1.0).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn order_symmetry() {
        assert_eq!(bessel_k(0.3, 2.0).unwrap(), bessel_k(-0.3, 2.0).unwrap());
    }

    #[test]
    fn integral_representation_value() {
        // mpmath besselk(1.5, 0.7)
        let want = 1.806_573_612_778_827_8;
        assert!((bessel_k(1.5, 0.7).unwrap() - want).abs() < 1e-8);
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(
            bessel_k(300.0, 1e-3),
            Err(SpecFunError::Overflow { .. })
        ));
    }

    #[test]
    fn k0_k1_known_values() {
        // A&S table values
        assert!((bessel_k(0.0, 1.0).unwrap() - 0.421_024_438_240_708_3).abs() < 1e-14);
        assert!((bessel_k(1.0, 1.0).unwrap() - 0.601_907_230_197_234_6).abs() < 1e-14);
    }
}
