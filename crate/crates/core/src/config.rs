//! Quadrature settings and the `key=value` config file they can be read from.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{Error, Result};

/// Panel-pair quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Triangle rule degree for well-separated pairs (`quad.regular_degree`).
    pub regular_degree: u32,
    /// Gauss points per direction of the singular transforms (`quad.singular_order`).
    pub singular_order: usize,
    /// Pairs whose centroid distance is below this multiple of the larger
    /// panel diameter use the degree-7 rule (`quad.near_threshold`).
    pub near_threshold: f64,
    /// Rule degree used for promoted near pairs.
    pub near_degree: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            regular_degree: 3,
            singular_order: 6,
            near_threshold: 2.0,
            near_degree: 7,
        }
    }
}

impl QuadConfig {
    /// Overrides fields from `quad.*` keys; other keys are ignored.
    pub fn apply(&mut self, entries: &BTreeMap<String, String>) -> Result<()> {
        for (key, value) in entries {
            let bad = |e: &dyn std::fmt::Display| {
                Error::InvalidArgument(format!("config key {key}={value}: {e}"))
            };
            match key.as_str() {
                "quad.regular_degree" => self.regular_degree = value.parse().map_err(|e| bad(&e))?,
                "quad.singular_order" => self.singular_order = value.parse().map_err(|e| bad(&e))?,
                "quad.near_threshold" => self.near_threshold = value.parse().map_err(|e| bad(&e))?,
                "quad.near_degree" => self.near_degree = value.parse().map_err(|e| bad(&e))?,
                _ => {}
            }
        }
        self.check()
    }

    pub fn check(&self) -> Result<()> {
        if self.singular_order == 0 || self.singular_order > 32 {
            return Err(Error::InvalidArgument(format!(
                "quad.singular_order must be in 1..=32, got {}",
                self.singular_order
            )));
        }
        if !(self.near_threshold >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "quad.near_threshold must be non-negative, got {}",
                self.near_threshold
            )));
        }
        crate::quadrature::TriangleRule::new(self.regular_degree)?;
        crate::quadrature::TriangleRule::new(self.near_degree)?;
        Ok(())
    }
}

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: "<config>".into(),
            line: n + 1,
            msg: format!("expected key=value, found {line:?}"),
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

pub fn read_key_values(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_key_values(&text).map_err(|e| match e {
        Error::Parse { line, msg, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        },
        other => other,
    })
}
