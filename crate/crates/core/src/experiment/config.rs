use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Strategy;
use crate::analysis::{TurnoverBaseline, TurnoverDirection, TurnoverOptions};
use crate::ingest::Format;
use crate::propagation::Threshold;
use crate::{Error, Result};

/// Experiment settings.
///
/// Read from a flat TOML document whose keys mirror the CLI flags, e.g.
///
/// ```toml
/// input = "out.facebook-wosn-wall"
/// format = "konect"
/// learning-windows = [10, 5, 1]
/// evaluation-windows = 10
/// strategies = ["outexp", "bethyp", "random"]
/// phi = [0.75]
/// rng-seed = 7
/// output = "results/facebook"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub input: Option<PathBuf>,
    pub format: Format,
    /// Label for the dataset column; defaults to the input file name.
    pub dataset: Option<String>,
    pub learning_windows: Vec<usize>,
    pub evaluation_windows: usize,
    pub strategies: Vec<Strategy>,
    pub seed_fraction: f64,
    pub phi: Vec<f64>,
    pub rng_seed: u64,
    pub random_runs: usize,
    pub output: PathBuf,
    pub ef_recency: bool,
    pub within_window_fixpoint: bool,
    pub clamp_pvalues: bool,
    pub turnover: TurnoverDirection,
    pub turnover_baseline: TurnoverBaseline,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            input: None,
            format: Format::Konect,
            dataset: None,
            learning_windows: vec![10, 5, 1],
            evaluation_windows: 10,
            strategies: Strategy::standard_set(),
            seed_fraction: 0.05,
            phi: vec![0.33, 0.50, 0.75],
            rng_seed: 0,
            random_runs: 100,
            output: PathBuf::from("results"),
            ef_recency: false,
            within_window_fixpoint: false,
            clamp_pvalues: false,
            turnover: TurnoverDirection::Out,
            turnover_baseline: TurnoverBaseline::Previous,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Loads a config file. Relative `input` and `output` paths are taken
    /// relative to the file's directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text).map_err(|e| e.context(path.display().to_string()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(input) = cfg.input.as_mut() {
            if input.is_relative() {
                *input = base.join(&*input);
            }
        }
        if cfg.output.is_relative() {
            cfg.output = base.join(&cfg.output);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.is_none() {
            return Err(Error::Config("no input file given".into()));
        }
        self.validate_parameters()
    }

    /// Checks everything except the presence of an input path.
    pub fn validate_parameters(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.learning_windows.is_empty() {
            return bad("learning-windows is empty".into());
        }
        if let Some(&k) = self.learning_windows.iter().find(|&&k| k == 0) {
            return Err(Error::InvalidWindowCount(k));
        }
        let mut sorted = self.learning_windows.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.learning_windows.len() {
            return bad("learning-windows contains duplicates".into());
        }
        if self.evaluation_windows == 0 {
            return Err(Error::InvalidWindowCount(0));
        }
        if self.strategies.is_empty() {
            return bad("strategies is empty".into());
        }
        if self.random_runs == 0 {
            return bad("random-runs must be at least 1".into());
        }
        if !(self.seed_fraction > 0.0 && self.seed_fraction <= 1.0) {
            return Err(Error::InvalidFraction(self.seed_fraction));
        }
        if self.phi.is_empty() {
            return bad("phi is empty".into());
        }
        for &phi in &self.phi {
            Threshold::new(phi)?;
        }
        Ok(())
    }

    /// Dataset label: the configured name, else the input file name.
    pub fn dataset_label(&self) -> String {
        self.dataset.clone().unwrap_or_else(|| {
            self.input
                .as_ref()
                .and_then(|p| p.file_name())
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into())
        })
    }

    pub fn turnover_options(&self) -> TurnoverOptions {
        TurnoverOptions {
            direction: self.turnover,
            baseline: self.turnover_baseline,
        }
    }
}
