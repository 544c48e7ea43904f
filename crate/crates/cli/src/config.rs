//! Settings resolved with precedence flag > config file > default.
//!
//! The config file holds `key = value` lines; `#` starts a comment and keys
//! are the long flag names (`_` and `-` are interchangeable).

use crate::error::CliError;
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display};
use std::path::Path;
use std::str::FromStr;

/// Comma-separated list value.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: Display,
{
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<T>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<Result<Vec<T>, String>>()
            .map(List)
    }
}

impl<T: Display> Display for List<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn normalize(key: &str) -> String {
    key.trim().replace('_', "-").to_ascii_lowercase()
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("config line {}: expected key = value", i + 1)))?;
        let k = normalize(k);
        if k.is_empty() {
            return Err(CliError::config(format!("config line {}: empty key", i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
    resolved: RefCell<Vec<(String, String)>>,
}

impl Resolver {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::config(format!("config file {}: {e}", p.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        Ok(Resolver { file, ..Default::default() })
    }

    /// Flag value, else config value, else `default`; the result is recorded.
    pub fn get<T>(&self, key: &str, flag: Option<T>, default: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let key = normalize(key);
        let from_file = match self.file.get(&key) {
            Some(raw) => {
                self.used.borrow_mut().insert(key.clone());
                Some(raw.parse::<T>().map_err(|e| CliError::config(format!("config key {key} = {raw:?}: {e}")))?)
            }
            None => None,
        };
        let v = flag.or(from_file).or(default);
        if let Some(v) = &v {
            self.resolved.borrow_mut().push((key, v.to_string()));
        }
        Ok(v)
    }

    pub fn value<T>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        Ok(self.get(key, flag, Some(default))?.expect("default given"))
    }

    pub fn required<T>(&self, key: &str, flag: Option<T>) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.get(key, flag, None)?
            .ok_or_else(|| CliError::config(format!("missing required setting --{}", normalize(key))))
    }

    /// Config keys that no setting consulted.
    pub fn unused(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.file.keys().filter(|k| !used.contains(*k)).cloned().collect()
    }

    pub fn resolved(&self) -> Vec<(String, String)> {
        self.resolved.borrow().clone()
    }
}
