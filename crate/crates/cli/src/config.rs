//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys:
//!
//! | key | used by | meaning |
//! |---|---|---|
//! | `n` | all | boundary dimension, 1..=3 |
//! | `seed` | all | 64-bit seed for every random stream |
//! | `fd_step` | verify | central finite-difference step, in `[1e-7, 1e-2]` |
//! | `quad_degree` | verify, poisson-eval | sphere quadrature degree, at least 4 |
//! | `suites` | verify | comma-separated suite names, may be empty |
//! | `output` | all | output path; stdout when absent |
//! | `tolerance.<check id>` | verify | override of one check tolerance |
//! | `lambda` | poisson-eval | spectral parameter `re,im` |
//! | `family` | poisson-eval | boundary function, e.g. `spherical-harmonic:1,0` |
//! | `grid` | verify, poisson-eval | `base` or `random:<count>:<radius>` |
//! | `radius` | verify, poisson-eval | mean-value sphere radius |
//! | `generator` | boundary-orbit | `identity`, `a:<t>`, `rotation`, `random:<scale>` or `matrix:<path>` |
//! | `start` | boundary-orbit | comma-separated unit vector or `random` |
//! | `steps` | boundary-orbit | number of orbit steps |

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::CliError;
use crate::registry;

const KNOWN_KEYS: &[&str] = &[
    "n", "seed", "fd_step", "quad_degree", "suites", "output", "lambda", "family", "grid", "radius", "generator", "start", "steps",
];

pub const SUITES: &[&str] = &["lie_core", "iwasawa", "boundary", "principal_series", "flow_calculus", "poisson"];

/// Parsed but untyped `key = value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) && !key.starts_with("tolerance.") {
                return Err(CliError::Config(format!("line {}: unknown key {key:?}", lineno + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key {key:?}", lineno + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|e| CliError::Config(format!("{key} = {v:?}: {e}"))),
        }
    }

    fn n(&self) -> Result<usize, CliError> {
        let n: usize = self.parsed("n", 2)?;
        if !(1..=3).contains(&n) {
            return Err(CliError::Config(format!("n = {n} outside 1..=3")));
        }
        Ok(n)
    }

    fn output(&self) -> Option<PathBuf> {
        self.get("output").filter(|s| !s.is_empty()).map(PathBuf::from)
    }

    fn quad_degree(&self, default: usize) -> Result<usize, CliError> {
        let degree: usize = self.parsed("quad_degree", default)?;
        if degree < 4 {
            return Err(CliError::Config(format!("quad_degree = {degree} must be at least 4")));
        }
        Ok(degree)
    }
}

/// Settings of a `verify` run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub n: usize,
    pub seed: u64,
    pub fd_step: f64,
    pub quad_degree: usize,
    pub suites: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub grid: String,
    pub radius: f64,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: 2,
            seed: 42,
            fd_step: 1e-5,
            quad_degree: 24,
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            tolerances: BTreeMap::new(),
            grid: "random:20:1.0".into(),
            radius: 0.02,
            output_path: None,
        }
    }
}

impl VerifyConfig {
    pub fn from_file(file: &ConfigFile) -> Result<Self, CliError> {
        let defaults = Self::default();
        let suites = match file.get("suites") {
            None => defaults.suites.clone(),
            Some(list) => list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect(),
        };
        let mut tolerances = BTreeMap::new();
        for (key, value) in &file.entries {
            if let Some(id) = key.strip_prefix("tolerance.") {
                let v: f64 = value.parse().map_err(|e| CliError::Config(format!("{key} = {value:?}: {e}")))?;
                tolerances.insert(id.to_string(), v);
            }
        }
        let cfg = Self {
            n: file.n()?,
            seed: file.parsed("seed", defaults.seed)?,
            fd_step: file.parsed("fd_step", defaults.fd_step)?,
            quad_degree: file.quad_degree(defaults.quad_degree)?,
            suites,
            tolerances,
            grid: file.get("grid").unwrap_or(&defaults.grid).to_string(),
            radius: file.parsed("radius", defaults.radius)?,
            output_path: file.output(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(1..=3).contains(&self.n) {
            return Err(CliError::Config(format!("n = {} outside 1..=3", self.n)));
        }
        if !(1e-7..=1e-2).contains(&self.fd_step) {
            return Err(CliError::Config(format!("fd_step = {} outside [1e-7, 1e-2]", self.fd_step)));
        }
        if self.quad_degree < 4 {
            return Err(CliError::Config(format!("quad_degree = {} must be at least 4", self.quad_degree)));
        }
        for suite in &self.suites {
            if !SUITES.contains(&suite.as_str()) {
                return Err(CliError::UnknownSuite(suite.clone()));
            }
        }
        for id in self.tolerances.keys() {
            if registry::check(id).is_none() {
                return Err(CliError::Config(format!("tolerance override for unknown check {id:?}")));
            }
        }
        Ok(())
    }
}

/// Settings of `poisson-eval`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonEvalConfig {
    pub n: usize,
    pub seed: u64,
    pub lambda: Complex64,
    pub family: String,
    pub grid: String,
    pub quad_degree: usize,
    pub radius: f64,
    pub output_path: Option<PathBuf>,
}

impl PoissonEvalConfig {
    pub fn from_file(file: &ConfigFile) -> Result<Self, CliError> {
        Ok(Self {
            n: file.n()?,
            seed: file.parsed("seed", 42)?,
            lambda: parse_complex(file.get("lambda").unwrap_or("0.7,0"))?,
            family: file.get("family").unwrap_or("constant:1").to_string(),
            grid: file.get("grid").unwrap_or("base").to_string(),
            quad_degree: file.quad_degree(24)?,
            radius: file.parsed("radius", 0.02)?,
            output_path: file.output(),
        })
    }
}

/// `re,im` or a bare real number.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|e| CliError::Config(format!("lambda {text:?}: {e}")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(CliError::Config(format!("lambda {text:?}: expected `re,im`"))),
    }
}

/// Settings of `boundary-orbit`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitConfig {
    pub n: usize,
    pub seed: u64,
    pub generator: String,
    pub start: String,
    pub steps: usize,
    pub output_path: Option<PathBuf>,
}

impl OrbitConfig {
    pub fn from_file(file: &ConfigFile) -> Result<Self, CliError> {
        Ok(Self {
            n: file.n()?,
            seed: file.parsed("seed", 42)?,
            generator: file.get("generator").unwrap_or("identity").to_string(),
            start: file.get("start").unwrap_or("random").to_string(),
            steps: file.parsed("steps", 20)?,
            output_path: file.output(),
        })
    }
}
