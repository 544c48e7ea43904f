use super::fit::{observations, read_fit};
use super::{kernel, output, quad};
use crate::args::{Common, PredictArgs};
use crate::config::Resolver;
use crate::error::CliError;
use crate::io::num;
use std::fmt::Write as _;
use std::path::PathBuf;
use wsfbm_core::inference::{extend_grid, kernel_spec, mse, predict_with};

/// Predicts the held-out tail when `fit-points` splits the input, otherwise
/// `horizon-steps` steps past the last observation.
pub fn run(a: &PredictArgs, c: &Common, r: &Resolver) -> Result<(), CliError> {
    let out = output(c, r, "predict")?;
    let seed: u64 = r.required("seed", c.seed)?;
    let (data, tail) = observations(&a.input, r)?;
    let spec = match r.get::<String>("fit", a.fit.as_ref().map(|p| p.display().to_string()), None)? {
        Some(p) => {
            let (family, a_hat, b_hat) = read_fit(&PathBuf::from(p))?;
            kernel_spec(family, a_hat, b_hat)?
        }
        None => kernel(&a.kernel, r)?.3,
    };
    let n_sims: usize = r.value("sims", a.sims, 200)?;
    let (times, truth): (Vec<f64>, Vec<f64>) = if tail.is_empty() {
        (extend_grid(data.grid(), r.value("horizon-steps", a.horizon_steps, 10)?), vec![])
    } else {
        let steps = r.value("horizon-steps", a.horizon_steps, tail.len())?;
        if steps > tail.len() {
            return Err(CliError::config(format!("horizon-steps {steps} exceeds the {} held-out points", tail.len())));
        }
        tail[..steps].iter().copied().unzip()
    };
    let p = predict_with(&data, &spec, &times, n_sims, seed, &quad(c, r)?)?;
    let has_truth = !truth.is_empty();
    let mut csv = String::from(if has_truth { "t,mean,sd,lo,hi,truth\n" } else { "t,mean,sd,lo,hi\n" });
    for k in 0..p.times.len() {
        let (lo, hi) = p.band.get(k).map_or((String::new(), String::new()), |b| (num(b.0), num(b.1)));
        let _ = write!(csv, "{},{},{},{lo},{hi}", num(p.times[k]), num(p.mean[k]), num(p.sd[k]));
        if has_truth {
            let _ = write!(csv, ",{}", num(truth[k]));
        }
        csv.push('\n');
    }
    let mut extra = vec![("points", p.times.len().to_string())];
    if has_truth {
        let e = mse(&p.mean, &truth)?;
        println!("mse = {}", num(e));
        extra.push(("mse", num(e)));
    }
    out.write("prediction.csv", &csv, &extra)?;
    Ok(())
}
