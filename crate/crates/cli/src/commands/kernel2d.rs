use super::{output, quad};
use crate::args::{Common, Kernel2dArgs};
use crate::config::{List, Resolver};
use crate::error::CliError;
use crate::io::num;
use crate::kinds::{Kernel2dKind, SignArg, WeightKind};
use rayon::prelude::*;
use std::fmt::Write as _;
use wsfbm_core::rdkernels::{c_af, k_haf, mixed_cov, QSign, RdWeightFn, SetGeometry, StationaryKernel};

/// Values at ((x, y), p) on an nx × ny grid over the rectangle, x varying fastest.
pub fn run(a: &Kernel2dArgs, c: &Common, r: &Resolver) -> Result<(), CliError> {
    let out = output(c, r, "kernel2d")?;
    let kind = r.value("kernel", a.kernel, Kernel2dKind::DoubleExp)?;
    let center = r.value("center", a.center.clone(), List(vec![0.0, 0.0]))?.0;
    let set = SetGeometry::ball(center, r.value("radius", a.radius, 1.0)?)?;
    if set.dim() != 2 {
        return Err(CliError::config(format!("center has {} coordinates; expected 2", set.dim())));
    }
    let wa = r.value("weight-a", a.weight_a, 0.0)?;
    let f = match r.value("weight", a.weight, WeightKind::Power)? {
        WeightKind::Power => RdWeightFn::RadialPower(wa),
        WeightKind::Exp => RdWeightFn::RadialExponential(wa),
    };
    let p = r.value("p", a.p.clone(), List(vec![2.0, 2.0]))?.0;
    if p.len() != 2 {
        return Err(CliError::config(format!("p has {} coordinates; expected 2", p.len())));
    }
    let xs = axis(r.value("xmin", a.xmin, -3.0)?, r.value("xmax", a.xmax, 3.0)?, r.value("nx", a.nx, 61)?, "x")?;
    let ys = axis(r.value("ymin", a.ymin, -3.0)?, r.value("ymax", a.ymax, 3.0)?, r.value("ny", a.ny, 61)?, "y")?;
    let stationary = |kind| -> Result<StationaryKernel, CliError> {
        let v = |k: &str, flag: Option<f64>| r.value(k, flag, 1.0);
        let k = match kind {
            Kernel2dKind::Matern => StationaryKernel::Matern { kappa: v("kappa", a.kappa)?, rho: v("rho", a.rho)? },
            Kernel2dKind::DoubleExp => StationaryKernel::DoubleExp { sigma: v("sigma", a.sigma)?, beta: v("beta", a.beta)? },
            Kernel2dKind::RationalQuadratic => StationaryKernel::RationalQuadratic {
                sigma: v("sigma", a.sigma)?,
                rho: v("rho", a.rho)?,
                kappa: v("kappa", a.kappa)?,
            },
            _ => StationaryKernel::Periodic { sigma: v("sigma", a.sigma)?, rho: v("rho", a.rho)?, beta: v("beta", a.beta)? },
        };
        k.validate()?;
        Ok(k)
    };
    let eval: Box<dyn Fn(&[f64]) -> Result<f64, CliError> + Sync> = match kind {
        Kernel2dKind::CAf => Box::new(|x| Ok(c_af(&set, f, x, &p)?)),
        Kernel2dKind::KHaf => {
            let h = r.value("hurst", a.hurst, 0.5)?;
            let sign = match r.value("sign", a.sign, SignArg::Minus)? {
                SignArg::Minus => QSign::Minus,
                SignArg::Plus => QSign::Plus,
            };
            let cfg = quad(c, r)?;
            Box::new(move |x| Ok(k_haf(&set, f, h, sign, x, &p, &cfg)?))
        }
        other => {
            let k = stationary(other)?;
            Box::new(move |x| Ok(mixed_cov(&k, &set, f, x, &p)?))
        }
    };
    let points: Vec<[f64; 2]> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| [x, y])).collect();
    let values = points.par_iter().map(|x| eval(x)).collect::<Result<Vec<f64>, CliError>>()?;
    let mut csv = String::from("x,y,value\n");
    for (x, v) in points.iter().zip(&values) {
        let _ = writeln!(csv, "{},{},{}", num(x[0]), num(x[1]), num(*v));
    }
    out.write("kernel2d.csv", &csv, &[("rows", values.len().to_string())])?;
    Ok(())
}

fn axis(lo: f64, hi: f64, n: usize, name: &str) -> Result<Vec<f64>, CliError> {
    if n == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo || (n > 1 && hi == lo) {
        return Err(CliError::config(format!("{name} axis needs finite {name}min < {name}max and n{name} >= 1")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}
