//! Flag, config-file and default precedence.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use cfie_core::config::read_key_values;
use cfie_core::{Formulation, QuadConfig, SolveConfig};

use crate::args::CommonArgs;
use crate::error::{usage, CliError};

pub const DEFAULT_ALPHA: f64 = 0.5;

const KNOWN_KEYS: &[&str] = &[
    "method",
    "methods",
    "k",
    "k_min",
    "k_max",
    "k_steps",
    "subdiv",
    "subdiv_list",
    "mesh",
    "alpha",
    "tol",
    "max_iter",
    "out",
    "workers",
    "mie_reference",
    "quad.regular_degree",
    "quad.singular_order",
    "quad.near_threshold",
    "quad.near_degree",
];

/// Config-file values, looked up only when the matching flag is absent.
#[derive(Debug, Default)]
pub struct FileConfig {
    entries: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<Self, CliError> {
        let entries = match path {
            Some(p) => read_key_values(p)?,
            None => BTreeMap::new(),
        };
        if let Some(bad) = entries.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(usage(format!("unknown config key '{bad}'")));
        }
        Ok(Self { entries })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.entries
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| usage(format!("config key {key}={v}: {e}")))
            })
            .transpose()
    }

    /// `flag`, else the config value, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn quad(&self) -> Result<QuadConfig, CliError> {
        let mut q = QuadConfig::default();
        q.apply(&self.entries).map_err(|e| usage(e.to_string()))?;
        Ok(q)
    }
}

/// Settings common to every solving command after precedence is applied.
#[derive(Debug, Clone)]
pub struct Common {
    pub solve: SolveConfig,
    pub alpha_given: bool,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub mie_reference: bool,
}

pub fn resolve_common(args: &CommonArgs, file: &FileConfig) -> Result<Common, CliError> {
    let alpha = file.pick(args.alpha, "alpha")?;
    let tol = file.pick(args.tol, "tol")?.unwrap_or(1e-5);
    let max_iter = file.pick(args.max_iter, "max_iter")?.unwrap_or(500);
    if !(tol > 0.0) {
        return Err(usage(format!("--tol must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(usage("--max-iter must be at least 1"));
    }
    if let Some(a) = alpha {
        if !a.is_finite() || a == 0.0 {
            return Err(usage(format!("--alpha must be finite and nonzero, got {a}")));
        }
    }
    let workers = file.pick(args.workers, "workers")?;
    if workers == Some(0) {
        return Err(usage("--workers must be at least 1"));
    }
    let mie_reference = args.mie_reference || file.get::<bool>("mie_reference")?.unwrap_or(false);
    Ok(Common {
        solve: SolveConfig {
            tol,
            max_iter,
            alpha: alpha.unwrap_or(DEFAULT_ALPHA),
            quad: file.quad()?,
        },
        alpha_given: alpha.is_some(),
        out: file.pick(args.out.clone(), "out")?,
        workers,
        mie_reference,
    })
}

pub fn parse_method(s: &str) -> Result<Formulation, CliError> {
    s.parse().map_err(|e: cfie_core::Error| usage(e.to_string()))
}

pub fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|p| p.trim())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|e| usage(format!("bad {what} '{p}': {e}"))))
        .collect()
}

pub fn positive_k(k: Option<f64>, name: &str) -> Result<f64, CliError> {
    match k {
        None => Err(usage(format!("--{name} is required"))),
        Some(k) if k > 0.0 && k.is_finite() => Ok(k),
        Some(k) => Err(usage(format!("--{name} must be positive, got {k}"))),
    }
}
