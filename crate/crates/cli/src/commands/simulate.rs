use super::{grid, kernel, method, output, quad};
use crate::args::{Common, SimulateArgs};
use crate::config::Resolver;
use crate::error::CliError;
use crate::io::num;
use crate::kinds::ProcessKind;
use std::fmt::Write as _;
use wsfbm_core::kernels::gram;
use wsfbm_core::processes::{geometric_sample, ou_sample, sample_paths, GeomSpec, OUSpec};

pub fn run(a: &SimulateArgs, c: &Common, r: &Resolver) -> Result<(), CliError> {
    let out = output(c, r, "simulate")?;
    let seed: u64 = r.required("seed", c.seed)?;
    let process = r.value("process", a.process, ProcessKind::Wsfbm)?;
    let (_, _, _, spec) = kernel(&a.kernel, r)?;
    let grid = grid(&a.grid, r)?;
    let n_paths: usize = r.value("paths", a.paths, 1)?;
    if n_paths == 0 {
        return Err(CliError::config("paths must be positive"));
    }
    let cfg = quad(c, r)?;
    let paths = match process {
        ProcessKind::Wsfbm => {
            let g = gram(&spec, &grid, method(c, r, 4)?, &cfg)?;
            sample_paths(&g, &grid, n_paths, seed)?
        }
        ProcessKind::Ou => {
            let s = OUSpec::new(
                spec,
                r.value("beta", a.beta, 1.0)?,
                r.value("sigma", a.sigma, 1.0)?,
                r.value("v0", a.v0, 0.0)?,
            )?;
            ou_sample(&s, &grid, n_paths, seed, &cfg)?
        }
        ProcessKind::Geometric => {
            let s = GeomSpec::new(
                spec,
                r.value("mu", a.mu, 0.0)?,
                r.value("sigma", a.sigma, 1.0)?,
                r.value("s0", a.s0, 1.0)?,
            )?;
            geometric_sample(&s, &grid, n_paths, seed, &cfg)?
        }
    };
    let mut csv = String::from("path_id,t,value\n");
    for p in &paths {
        for (t, v) in p.iter() {
            let _ = writeln!(csv, "{},{},{}", p.path_id, num(t), num(v));
        }
    }
    out.write("paths.csv", &csv, &[("rows", (csv.lines().count() - 1).to_string())])?;
    Ok(())
}
