//! Subcommand implementations.

mod bench;
mod fit;
mod gram;
mod kernel2d;
mod predict;
mod simulate;

use crate::args::{Cli, Command, Common, GridArgs, KernelArgs};
use crate::config::{List, Resolver};
use crate::error::CliError;
use crate::io::Output;
use std::path::PathBuf;
use wsfbm_core::inference::{kernel_spec, Family};
use wsfbm_core::kernels::{GramMethod, KernelSpec, TimeGrid};
use wsfbm_core::quadrature::QuadConfig;

pub fn run(cli: Cli) -> Result<(), CliError> {
    let r = Resolver::load(cli.common.config.as_deref())?;
    let c = &cli.common;
    match &cli.command {
        Command::Simulate(a) => simulate::run(a, c, &r),
        Command::Gram(a) => gram::run(a, c, &r),
        Command::Fit(a) => fit::run(a, c, &r),
        Command::Predict(a) => predict::run(a, c, &r),
        Command::Bench(a) => bench::run(a, c, &r),
        Command::Kernel2d(a) => kernel2d::run(a, c, &r),
    }?;
    for key in r.unused() {
        eprintln!("wsfbm: warning: config key {key} is not used by {}", cli.command.name());
    }
    Ok(())
}

pub(crate) fn output<'a>(c: &Common, r: &'a Resolver, command: &'static str) -> Result<Output<'a>, CliError> {
    let dir: String = r.value("out", c.out.as_ref().map(|p| p.display().to_string()), ".".into())?;
    Output::new(PathBuf::from(dir), command, r)
}

pub(crate) fn quad(c: &Common, r: &Resolver) -> Result<QuadConfig, CliError> {
    let d = QuadConfig::default();
    let cfg = QuadConfig::with_tols(r.value("abs-tol", c.abs_tol, d.abs_tol)?, r.value("rel-tol", c.rel_tol, d.rel_tol)?);
    cfg.validate()?;
    Ok(cfg)
}

pub(crate) fn method(c: &Common, r: &Resolver, default: u8) -> Result<GramMethod, CliError> {
    let k: u8 = r.value("method", c.method, default)?;
    GramMethod::try_from(k).map_err(|_| CliError::config(format!("method {k} is not supported; expected 1 to 4")))
}

/// Family, a and b with the Brownian default f ≡ 1, b = 0.
pub(crate) fn kernel(k: &KernelArgs, r: &Resolver) -> Result<(Family, f64, f64, KernelSpec), CliError> {
    let family = r.value("family", k.family, Family::C1)?;
    let a = r.value("a", k.a, 0.0)?;
    let b = r.value("b", k.b, 0.0)?;
    Ok((family, a, b, kernel_spec(family, a, b)?))
}

pub(crate) fn grid(g: &GridArgs, r: &Resolver) -> Result<TimeGrid, CliError> {
    if let Some(List(times)) = r.get("times", g.times.clone(), None)? {
        return Ok(TimeGrid::from_positive(&times)?);
    }
    Ok(TimeGrid::uniform(r.value("horizon", g.horizon, 1.0)?, r.value("n", g.n, 100)?)?)
}
