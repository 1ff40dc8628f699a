//! Flat `key=value` run configuration.
//!
//! Recognised keys: `grid_size`, `n_list` (comma-separated), `samples_per_rect`,
//! `tolerances.tail`, `tolerances.quadrature`, `tolerances.bisection`,
//! `output_dir`, `seed`. Blank lines and `#` comments are ignored.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative stopping tolerance of the adaptive series truncation.
    pub tail: f64,
    /// Slack coefficient `τ` in `|closed - direct| ≤ bound + τ(1 + |direct|)`;
    /// the identity check uses `τ/100`.
    pub quadrature: f64,
    /// Relative tolerance of the Luxemburg-norm bisection.
    pub bisection: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tail: 1e-9, quadrature: 1e-8, bisection: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid_size: usize,
    pub n_list: Vec<u32>,
    pub samples_per_rect: usize,
    pub tolerances: Tolerances,
    pub output_dir: PathBuf,
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_size: 512,
            n_list: vec![3, 4, 5],
            samples_per_rect: 9,
            tolerances: Tolerances::default(),
            output_dir: PathBuf::from("."),
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for ConfigError {}

fn parse_value<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError { line, msg: format!("bad value {v:?} for {key}") })
}

/// Parses `3,4,5`; an empty string is an empty list.
pub fn parse_n_list(v: &str) -> Result<Vec<u32>, String> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| s.parse().map_err(|_| format!("bad scale {s:?}"))).collect()
}

impl RunConfig {
    /// Applies `key=value` lines on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let (k, v) = s.split_once('=').ok_or(ConfigError { line, msg: format!("expected key=value, got {s:?}") })?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "grid_size" => c.grid_size = parse_value(line, k, v)?,
                "n_list" => c.n_list = parse_n_list(v).map_err(|msg| ConfigError { line, msg })?,
                "samples_per_rect" => c.samples_per_rect = parse_value(line, k, v)?,
                "tolerances.tail" => c.tolerances.tail = parse_value(line, k, v)?,
                "tolerances.quadrature" => c.tolerances.quadrature = parse_value(line, k, v)?,
                "tolerances.bisection" => c.tolerances.bisection = parse_value(line, k, v)?,
                "output_dir" => c.output_dir = PathBuf::from(v),
                "seed" => c.seed = if v.is_empty() { None } else { Some(parse_value(line, k, v)?) },
                _ => return Err(ConfigError { line, msg: format!("unknown key {k:?}") }),
            }
        }
        c.validate().map_err(|msg| ConfigError { line: 0, msg })?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.grid_size < 4 || !self.grid_size.is_power_of_two() {
            return Err(format!("grid_size {} must be a power of two >= 4", self.grid_size));
        }
        if self.samples_per_rect == 0 {
            return Err("samples_per_rect must be positive".into());
        }
        let t = &self.tolerances;
        for (name, v) in [("tail", t.tail), ("quadrature", t.quadrature), ("bisection", t.bisection)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("tolerances.{name} must be finite and non-negative"));
            }
        }
        if t.bisection <= 0.0 {
            return Err("tolerances.bisection must be positive".into());
        }
        Ok(())
    }

    /// Serializes every key; `parse(to_text())` returns `self`.
    pub fn to_text(&self) -> String {
        let n_list: Vec<String> = self.n_list.iter().map(u32::to_string).collect();
        let mut s = String::new();
        s += &format!("grid_size={}\n", self.grid_size);
        s += &format!("n_list={}\n", n_list.join(","));
        s += &format!("samples_per_rect={}\n", self.samples_per_rect);
        s += &format!("tolerances.tail={:?}\n", self.tolerances.tail);
        s += &format!("tolerances.quadrature={:?}\n", self.tolerances.quadrature);
        s += &format!("tolerances.bisection={:?}\n", self.tolerances.bisection);
        s += &format!("output_dir={}\n", self.output_dir.display());
        if let Some(seed) = self.seed {
            s += &format!("seed={seed}\n");
        }
        s
    }
}
