use super::{grid, kernel, method, output, quad};
use crate::args::{Common, GramArgs};
use crate::config::Resolver;
use crate::error::CliError;
use crate::io::num;
use std::fmt::Write as _;
use wsfbm_core::kernels::gram;

/// Lower triangle with 1-based indices over the positive grid points; the
/// diagonal excludes any stabilizing jitter, which is recorded in the metadata.
pub fn run(a: &GramArgs, c: &Common, r: &Resolver) -> Result<(), CliError> {
    let out = output(c, r, "gram")?;
    let (_, _, _, spec) = kernel(&a.kernel, r)?;
    let grid = grid(&a.grid, r)?;
    let m = method(c, r, 4)?;
    let cfg = quad(c, r)?;
    let g = gram(&spec, &grid, m, &cfg)?;
    let jitter = g.jitter_applied();
    let t = grid.positive();
    let mut csv = String::from("i,j,t_i,t_j,value\n");
    for i in 0..t.len() {
        for j in 0..=i {
            let v = g.entries()[(i, j)] - if i == j { jitter } else { 0.0 };
            let _ = writeln!(csv, "{},{},{},{},{}", i + 1, j + 1, num(t[i]), num(t[j]), num(v));
        }
    }
    out.write(
        "gram.csv",
        &csv,
        &[
            ("jitter", num(jitter)),
            ("unconverged_entries", g.unconverged().to_string()),
            ("min_eigenvalue", num(g.min_eigenvalue())),
        ],
    )?;
    Ok(())
}
