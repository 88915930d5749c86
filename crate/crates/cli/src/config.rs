//! Run configuration: defaults, the optional JSON file and flag overrides.

use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use spherepack::forms::FormsConfig;
use spherepack::magic::QuadratureConfig;

use crate::args::GlobalArgs;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// `lo:hi:n`; linear for radii, logarithmic for the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridSpec {
    fn validate(&self) -> Result<(), String> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || !(self.hi > self.lo) || self.n < 2 {
            return Err(format!(
                "grid needs finite lo < hi and n >= 2, got {}:{}:{}",
                self.lo, self.hi, self.n
            ));
        }
        Ok(())
    }

    pub fn linear(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        let mut g: Vec<f64> = (0..self.n).map(|i| self.lo + step * i as f64).collect();
        g[self.n - 1] = self.hi;
        g
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("expected lo:hi:n, got {s:?}"));
        };
        let spec = GridSpec {
            lo: lo.trim().parse().map_err(|e| format!("bad lo {lo:?}: {e}"))?,
            hi: hi.trim().parse().map_err(|e| format!("bad hi {hi:?}: {e}"))?,
            n: n.trim().parse().map_err(|e| format!("bad n {n:?}: {e}"))?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Number of `q`-terms kept in every expansion.
    pub series_order: i64,
    pub eta_min: f64,
    pub quadrature: QuadratureConfig,
    /// Grid override; `None` keeps each command's default grid.
    pub grid: Option<GridSpec>,
    pub seed: u64,
    /// 0 uses every core.
    pub threads: usize,
    pub output_format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let forms = FormsConfig::default();
        RunConfig {
            series_order: forms.order,
            eta_min: forms.eta_min,
            quadrature: QuadratureConfig::default(),
            grid: None,
            seed: 42,
            threads: 0,
            output_format: Format::Json,
        }
    }
}

impl RunConfig {
    /// Defaults, then the config file, then flags.
    pub fn resolve(args: &GlobalArgs) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(path) => Self::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(f) = args.format {
            cfg.output_format = f;
        }
        if let Some(s) = args.seed {
            cfg.seed = s;
        }
        if let Some(t) = args.threads {
            cfg.threads = t;
        }
        if let Some(g) = args.grid {
            cfg.grid = Some(g);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.series_order < 2 {
            return Err(CliError::Config("series_order must be >= 2".into()));
        }
        if !(self.eta_min > 0.0) {
            return Err(CliError::Config("eta_min must be positive".into()));
        }
        self.quadrature
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(g) = &self.grid {
            g.validate().map_err(CliError::Config)?;
        }
        Ok(())
    }

    pub fn forms_config(&self) -> FormsConfig {
        FormsConfig {
            order: self.series_order,
            eta_min: self.eta_min,
            ..FormsConfig::default()
        }
    }
}
