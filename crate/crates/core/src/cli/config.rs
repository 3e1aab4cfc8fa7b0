//! Run configuration: command-line flags over an optional config file over
//! built-in defaults.
//!
//! The config file is a flat list of `key = value` lines (TOML syntax, so
//! strings are quoted):
//!
//! ```text
//! lambda = 1.0
//! omega = 0.5
//! m = 1
//! a_range = "0.1:10"
//! rel_tol = 1e-11
//! format = "json"
//! ```

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::IntegrateConfig;
use crate::shoot::ShootConfig;

pub const CONFIG_ENV: &str = "VORTEXLAB_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// `a` as a single value or a closed range `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AValue {
    Single(f64),
    Range(f64, f64),
}

/// Keys accepted in the config file. All optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lambda: Option<f64>,
    pub omega: Option<f64>,
    pub m: Option<i32>,
    pub a: Option<f64>,
    pub a_range: Option<String>,
    pub k: Option<i64>,
    pub r_max: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub conv_tol: Option<f64>,
    pub series_tol: Option<f64>,
    pub shoot_tol: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("config file: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The file named by `VORTEXLAB_CONFIG`, or an empty config.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub lambda: f64,
    pub omega: f64,
    pub m: i32,
    pub a: Option<AValue>,
    pub k: Option<i64>,
    pub r_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub conv_tol: f64,
    pub series_tol: f64,
    pub shoot_tol: f64,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let i = IntegrateConfig::default();
        Self {
            lambda: 0.0,
            omega: 0.0,
            m: 1,
            a: None,
            k: None,
            r_max: i.r_max,
            rel_tol: i.rel_tol,
            abs_tol: i.abs_tol,
            conv_tol: i.conv_tol,
            series_tol: i.series_tol,
            shoot_tol: ShootConfig::default().shoot_tol,
            output_path: None,
            format: None,
        }
    }
}

impl RunConfig {
    /// Defaults overridden by the file.
    pub fn from_file(file: &FileConfig) -> Result<Self> {
        let mut c = Self::default();
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = file.$f { c.$f = v; } )* };
        }
        take!(lambda, omega, m, r_max, rel_tol, abs_tol, conv_tol, series_tol, shoot_tol);
        c.k = file.k;
        c.format = file.format;
        c.output_path = file.output.clone();
        c.a = match (&file.a, &file.a_range) {
            (_, Some(r)) => Some(parse_a(r)?),
            (Some(a), None) => Some(AValue::Single(*a)),
            (None, None) => None,
        };
        Ok(c)
    }

    pub fn integrate_config(&self) -> IntegrateConfig {
        IntegrateConfig {
            r_max: self.r_max,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            conv_tol: self.conv_tol,
            series_tol: self.series_tol,
            ..IntegrateConfig::default()
        }
    }

    pub fn shoot_config(&self) -> ShootConfig {
        ShootConfig {
            integrate: self.integrate_config(),
            shoot_tol: self.shoot_tol,
            ..ShootConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.integrate_config().validate()?;
        if !(self.shoot_tol > 0.0) {
            return Err(Error::InvalidConfig("shoot_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Parse `lo:hi` (or a single number, meaning `lo = hi`).
pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidConfig(format!("bad range '{s}', expected lo:hi"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn parse_a(s: &str) -> Result<AValue> {
    if s.contains(':') {
        let (lo, hi) = parse_range(s)?;
        Ok(AValue::Range(lo, hi))
    } else {
        s.trim()
            .parse()
            .map(AValue::Single)
            .map_err(|_| Error::InvalidConfig(format!("bad value for a: '{s}'")))
    }
}
