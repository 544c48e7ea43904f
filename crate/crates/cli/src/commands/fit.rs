use super::{output, quad};
use crate::args::{Common, FitArgs, InputArgs};
use crate::config::{parse_config, Resolver};
use crate::error::CliError;
use crate::io::{num, read_observations};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use wsfbm_core::inference::{fit_mle_with, Dataset, Family, FitOptions, FitResult, GramCache, ProfileCi};

pub fn run(a: &FitArgs, c: &Common, r: &Resolver) -> Result<(), CliError> {
    let out = output(c, r, "fit")?;
    let (data, _) = observations(&a.input, r)?;
    let family = r.value("family", a.family, Family::C1)?;
    let level: f64 = r.value("level", a.level, 0.95)?;
    if !(0.0..1.0).contains(&level) {
        return Err(CliError::config(format!("level {level} must be in [0, 1)")));
    }
    let opts = FitOptions {
        cfg: quad(c, r)?,
        pin_b: r.get("pin-b", a.pin_b, None)?,
        ci_level: (level > 0.0).then_some(level),
        ..FitOptions::default()
    };
    let fit = fit_mle_with(&data, family, &opts, &GramCache::default())?;
    out.write("fit.txt", &render(&fit, data.len()), &[])?;
    println!("a_hat = {}\nb_hat = {}\nloglik = {}", num(fit.a_hat), num(fit.b_hat), num(fit.loglik));
    if !fit.converged {
        return Err(CliError::NotConverged(format!("fit stopped after {} evaluations; {}", fit.evals, fit.warnings.join("; "))));
    }
    Ok(())
}

/// The observations and, with `fit-points`, the held-out tail.
pub(crate) fn observations(i: &InputArgs, r: &Resolver) -> Result<(Dataset, Vec<(f64, f64)>), CliError> {
    let path: String = r.required("input", i.input.as_ref().map(|p| p.display().to_string()))?;
    let data = read_observations(&PathBuf::from(path), r.get("path-id", i.path_id, None)?)?;
    match r.get::<usize>("fit-points", i.fit_points, None)? {
        Some(n) => Ok(data.split(n)?),
        None => Ok((data, vec![])),
    }
}

/// Fit result as `key = value` lines.
fn render(fit: &FitResult, n: usize) -> String {
    let mut s = String::from("# wsfbm fit result\n");
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("family", fit.family.to_string());
    kv("n", n.to_string());
    kv("a_hat", num(fit.a_hat));
    kv("b_hat", num(fit.b_hat));
    kv("b_pinned", fit.b_pinned.to_string());
    kv("loglik", num(fit.loglik));
    kv("aic", num(fit.aic));
    kv("converged", fit.converged.to_string());
    kv("evals", fit.evals.to_string());
    kv("a_range", format!("{},{}", num(fit.a_range.0), num(fit.a_range.1)));
    kv("b_range", format!("{},{}", num(fit.b_range.0), num(fit.b_range.1)));
    for (name, ci) in [("a", &fit.ci_a), ("b", &fit.ci_b)] {
        if let Some(ci) = ci {
            ci_lines(&mut kv, name, ci);
        }
    }
    for (i, w) in fit.warnings.iter().enumerate() {
        kv(&format!("warning_{}", i + 1), w.replace('#', ""));
    }
    s
}

fn ci_lines(kv: &mut impl FnMut(&str, String), name: &str, ci: &ProfileCi) {
    let iv = &ci.interval;
    kv(&format!("ci_{name}_level"), num(ci.level));
    kv(&format!("ci_{name}_lo"), num(iv.lo));
    kv(&format!("ci_{name}_hi"), num(iv.hi));
    kv(&format!("ci_{name}_lo_at_edge"), iv.lo_at_edge.to_string());
    kv(&format!("ci_{name}_hi_at_edge"), iv.hi_at_edge.to_string());
    let curve: Vec<String> = ci.curve.iter().map(|(x, d)| format!("{}:{}", num(*x), num(*d))).collect();
    kv(&format!("profile_{name}"), curve.join(";"));
}

/// Family, a_hat and b_hat from a fit file.
pub(crate) fn read_fit(path: &Path) -> Result<(Family, f64, f64), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("fit file {}: {e}", path.display())))?;
    let map = parse_config(&text)?;
    let get = |k: &str| {
        map.get(k).ok_or_else(|| CliError::config(format!("fit file {}: missing {k}", path.display())))
    };
    let family = get("family")?.parse::<Family>()?;
    let parse = |k: &str| -> Result<f64, CliError> {
        get(k)?.parse().map_err(|_| CliError::config(format!("fit file {}: {k} is not a number", path.display())))
    };
    Ok((family, parse("a-hat")?, parse("b-hat")?))
}
