//! Output files with metadata sidecars, and observation input.

use crate::config::Resolver;
use crate::error::CliError;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use wsfbm_core::inference::Dataset;
use wsfbm_core::kernels::TimeGrid;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip decimal; exponent form for very small or large magnitudes.
pub fn num(x: f64) -> String {
    let m = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Writer for one command's outputs under the output directory.
pub struct Output<'a> {
    dir: PathBuf,
    command: &'static str,
    resolver: &'a Resolver,
}

impl<'a> Output<'a> {
    pub fn new(dir: PathBuf, command: &'static str, resolver: &'a Resolver) -> Result<Self, CliError> {
        std::fs::create_dir_all(&dir)
            .map_err(|e| CliError::config(format!("output directory {}: {e}", dir.display())))?;
        Ok(Output { dir, command, resolver })
    }

    /// Write `name` and `name.meta`; `extra` lines follow the resolved settings.
    pub fn write(&self, name: &str, contents: &str, extra: &[(&str, String)]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::config(format!("writing {}: {e}", path.display())))?;
        let mut meta = String::from("# wsfbm run metadata\n");
        let _ = writeln!(meta, "tool = wsfbm");
        let _ = writeln!(meta, "version = {VERSION}");
        let _ = writeln!(meta, "command = {}", self.command);
        let _ = writeln!(meta, "file = {name}");
        let mut seen = Vec::<(String, String)>::new();
        for (k, v) in self.resolver.resolved() {
            match seen.iter_mut().find(|(key, _)| *key == k) {
                Some(entry) => entry.1 = v,
                None => seen.push((k, v)),
            }
        }
        for (k, v) in seen {
            let _ = writeln!(meta, "{k} = {v}");
        }
        for (k, v) in extra {
            let _ = writeln!(meta, "{k} = {v}");
        }
        let meta_path = self.dir.join(format!("{name}.meta"));
        std::fs::write(&meta_path, meta)
            .map_err(|e| CliError::config(format!("writing {}: {e}", meta_path.display())))?;
        Ok(path)
    }
}

/// Observations from a `path_id,t,value` or `t,value` file. Without a t = 0
/// row the value 0 at t₀ = 0 is prepended. With several paths and no
/// `path_id`, the first path in the file is used.
pub fn read_observations(path: &Path, path_id: Option<u64>) -> Result<Dataset, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("input {}: {e}", path.display())))?;
    let bad = |line: usize, msg: &str| CliError::config(format!("{}:{line}: {msg}", path.display()));
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| bad(1, "empty input"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let find = |name: &str| cols.iter().position(|c| *c == name);
    let (ti, vi) = match (find("t"), find("value")) {
        (Some(t), Some(v)) => (t, v),
        _ => return Err(bad(hline, "header must name columns t and value")),
    };
    let pi = find("path_id");
    let mut chosen = path_id;
    let (mut times, mut values) = (Vec::new(), Vec::new());
    for (ln, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != cols.len() {
            return Err(bad(ln, &format!("expected {} fields", cols.len())));
        }
        if let Some(pi) = pi {
            let id: u64 = fields[pi].parse().map_err(|_| bad(ln, "path_id is not an integer"))?;
            if *chosen.get_or_insert(id) != id {
                continue;
            }
        }
        let parse = |s: &str, what: &str| s.parse::<f64>().map_err(|_| bad(ln, &format!("{what} is not a number")));
        times.push(parse(fields[ti], "t")?);
        values.push(parse(fields[vi], "value")?);
    }
    if times.is_empty() {
        return Err(match (pi, path_id) {
            (Some(_), Some(id)) => CliError::config(format!("{}: no rows for path_id {id}", path.display())),
            _ => CliError::config(format!("{}: no observations", path.display())),
        });
    }
    if times[0] != 0.0 {
        times.insert(0, 0.0);
        values.insert(0, 0.0);
    }
    let grid = TimeGrid::new(times).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    Ok(Dataset::new(grid, values)?)
}
