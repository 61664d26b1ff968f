//! JSON experiment configuration.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use nli_core::corpus::{L1Label, DEFAULT_LABELS};
use nli_core::features::FeatureConfig;
use nli_core::svm::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SEED_ENV: &str = "NLI_SEED";

fn default_labels() -> Vec<L1Label> {
    DEFAULT_LABELS.iter().map(|&l| L1Label::new(l)).collect()
}

fn default_target_tokens() -> usize {
    250
}

fn default_c() -> f64 {
    1.0
}

fn default_k() -> usize {
    10
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_max_iter() -> usize {
    DEFAULT_MAX_ITER
}

/// Experiment configuration. Relative paths are resolved against the
/// directory of the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub manifest: PathBuf,
    /// Keep only texts of this genre; all genres when absent.
    #[serde(default)]
    pub genre: Option<String>,
    #[serde(default = "default_labels")]
    pub labels: Vec<L1Label>,
    #[serde(default = "default_target_tokens")]
    pub target_tokens: usize,
    #[serde(default)]
    pub features: FeatureConfig,
    #[serde(default = "default_c")]
    pub c: f64,
    /// C values for `nli gridsearch` when `--grid` is not given.
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Function-word list; the bundled list when absent.
    #[serde(default)]
    pub lexicon: Option<PathBuf>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub lexicon: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str, origin: &Path) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!(
                "{}:{}:{}: {e}",
                origin.display(),
                e.line(),
                e.column()
            ))
        })
    }

    /// Read, resolve paths, apply overrides and validate.
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_json(&text, path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.resolve_paths(base);
        config.apply(overrides)?;
        config.validate()?;
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        self.manifest = base.join(&self.manifest);
        self.out_dir = base.join(&self.out_dir);
        if let Some(lexicon) = &self.lexicon {
            self.lexicon = Some(base.join(lexicon));
        }
    }

    /// Flags win over the file; `NLI_SEED` is used only when neither sets a seed.
    fn apply(&mut self, overrides: &Overrides) -> Result<(), CliError> {
        if let Some(seed) = overrides.seed {
            self.seed = Some(seed);
        }
        if self.seed.is_none() {
            if let Ok(raw) = std::env::var(SEED_ENV) {
                let seed = raw.trim().parse().map_err(|_| {
                    CliError::Config(format!("{SEED_ENV}=`{raw}` is not an unsigned integer"))
                })?;
                self.seed = Some(seed);
            }
        }
        if let Some(lexicon) = &overrides.lexicon {
            self.lexicon = Some(lexicon.clone());
        }
        if let Some(out) = &overrides.out_dir {
            self.out_dir = out.clone();
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));
        if !self.manifest.is_file() {
            return err(format!(
                "`manifest`: {} does not exist",
                self.manifest.display()
            ));
        }
        if let Some(lexicon) = &self.lexicon {
            if !lexicon.is_file() {
                return err(format!("`lexicon`: {} does not exist", lexicon.display()));
            }
        }
        if self.k < 2 {
            return err(format!("`k`: K must be at least 2, got {}", self.k));
        }
        let distinct: BTreeSet<_> = self.labels.iter().collect();
        if distinct.len() != self.labels.len() {
            return err("`labels`: duplicate label".into());
        }
        if self.labels.len() < 2 {
            return err(format!(
                "`labels`: need at least 2 labels, got {}",
                self.labels.len()
            ));
        }
        if self.target_tokens == 0 {
            return err("`target_tokens` must be positive".into());
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return err(format!("`c` must be positive, got {}", self.c));
        }
        if let Some(grid) = &self.grid {
            if grid.is_empty() || grid.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
                return err("`grid` must be a non-empty list of positive values".into());
            }
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return err(format!("`tol` must be positive, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return err("`max_iter` must be positive".into());
        }
        self.features
            .validate()
            .map_err(|e| CliError::Config(format!("`features`: {e}")))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// Parse `1e-6..1` (every decade from the lower to the upper bound) or a
/// comma-separated list of values.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("`--grid`: cannot parse `{spec}`"));
    let positive = |s: &str| -> Result<f64, CliError> {
        let v: f64 = s.trim().parse().map_err(|_| bad())?;
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (positive(lo)?, positive(hi)?);
        if lo > hi {
            return Err(bad());
        }
        let (lo_exp, hi_exp) = (lo.log10().round() as i32, hi.log10().round() as i32);
        Ok((lo_exp..=hi_exp)
            .map(|e| format!("1e{e}").parse().unwrap())
            .collect())
    } else {
        spec.split(',').map(positive).collect()
    }
}
