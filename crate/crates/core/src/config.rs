//! Run configuration: defaults, a flat `key = value` file format, and validation.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::gridfield::Grid1D;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(LabError::Validation(format!("unknown format `{other}` (csv|json)"))),
        }
    }
}

/// Grid, tau list, seed and output settings shared by all commands.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub n: usize,
    /// Window length; `None` means the square grid `L = sqrt(N)`.
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub tau_list: Vec<f64>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { n: 128, l: None, tau_list: vec![0.0, 0.3, 0.5, 0.7, 1.0], seed: 7, output_dir: PathBuf::from("out"), format: Format::Csv }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| LabError::Validation(format!("bad value for {key}: `{v}`")))
}

/// Parses a comma separated list of reals.
pub fn parse_tau_list(v: &str) -> Result<Vec<f64>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num("tau_list", s)).collect()
}

impl RunConfig {
    /// Window length in use.
    pub fn window(&self) -> f64 {
        self.l.unwrap_or((self.n as f64).sqrt())
    }

    pub fn grid(&self) -> Result<Grid1D<f64>> {
        Grid1D::new(self.n, self.window())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_power_of_two() {
            return Err(LabError::Validation(format!("N = {} is not a power of two", self.n)));
        }
        if let Some(l) = self.l {
            if !(l > 0.0 && l.is_finite()) {
                return Err(LabError::Validation(format!("L = {l} must be positive")));
            }
        }
        if self.tau_list.is_empty() {
            return Err(LabError::Validation("tau_list is empty".into()));
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "N" | "n" => self.n = parse_num(key, value)?,
            "L" | "l" => self.l = Some(parse_num(key, value)?),
            "tau_list" => self.tau_list = parse_tau_list(value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "format" => self.format = value.parse()?,
            other => return Err(LabError::Validation(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Parses flat `key = value` text; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LabError::Validation(format!("line {}: expected key = value", i + 1)))?;
            c.set(k, v)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_use_square_grid() {
        let c = RunConfig::default();
        assert!(c.grid().unwrap().is_square());
        c.validate().unwrap();
    }

    #[test]
    fn parses_flat_file() {
        let c = RunConfig::parse("# run\nN = 64\nL=16\n tau_list = 0.25, 0.5\nseed=3\nformat = json\n").unwrap();
        assert_eq!((c.n, c.l, c.seed, c.format), (64, Some(16.0), 3, Format::Json));
        assert_eq!(c.tau_list, vec![0.25, 0.5]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("N = 100").is_err());
        assert!(RunConfig::parse("L = -1").is_err());
        assert!(RunConfig::parse("tau_list = ").is_err());
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("N 64").is_err());
    }
}
