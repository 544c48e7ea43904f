use super::{output, quad};
use crate::args::{BenchArgs, Common};
use crate::config::{List, Resolver};
use crate::error::CliError;
use wsfbm_core::bench::{run_bench, BenchConfig};
use wsfbm_core::inference::Family;

/// `--methods` wins over `--method`; without either all four run.
pub fn run(a: &BenchArgs, c: &Common, r: &Resolver) -> Result<(), CliError> {
    let out = output(c, r, "bench")?;
    let single: Option<u8> = r.get("method", c.method, None)?;
    let methods: List<u8> = r.value("methods", a.methods.clone(), List(single.map_or(vec![1, 2, 3, 4], |m| vec![m])))?;
    let config = BenchConfig {
        horizon: r.value("horizon", a.horizon, 10.0)?,
        repeats: r.value("repeats", a.repeats, 5)?,
        parallel: r.value("parallel", a.parallel, false)?,
        quad: quad(c, r)?,
        ..BenchConfig::new(
            r.value("family", a.kernel.family, Family::C1)?,
            r.value("a", a.kernel.a, 0.21)?,
            r.value("b", a.kernel.b, 1.28)?,
            r.value("sizes", a.sizes.clone(), List(vec![100]))?.0,
            BenchConfig::methods_from_numbers(&methods.0)?,
        )
    };
    let report = run_bench(&config)?;
    let env = [("environment", report.environment.clone())];
    out.write("bench_timing.csv", &report.timing_csv(), &env)?;
    out.write("bench_accuracy.csv", &report.accuracy_csv(), &env)?;
    out.write("bench_speedup.csv", &report.speedup_csv(), &env)?;
    print!("{}", report.timing_csv());
    println!("max_coord_diff = {:e}", report.max_diff());
    Ok(())
}
