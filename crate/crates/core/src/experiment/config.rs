//! Experiment configuration, read from TOML.
//!
//! ```toml
//! dataset = "cornell"            # a WebKB directory name, or "synthetic"
//! methods = ["gcnh", "rgcnh"]
//! realizations = 50
//! base_seed = 2024
//! output = "results/cornell.csv" # optional, overridden by --out
//! record_timing = false          # wall-clock seconds are not reproducible
//! normalize_features = true
//!
//! [perturbation]
//! kind = "uniform-rewire"        # or "subset-rewire"
//! levels = [0.0, 0.02, 0.05, 0.1, 0.15]
//! subset_probability = 0.5       # subset-rewire: rewiring level inside the subset
//! prior_mask = true              # subset-rewire: restrict the distance prox to the subset
//!
//! [split]
//! fractions = [0.48, 0.32, 0.20]
//! seeds = 10
//! rare_classes = "reject"        # or "test": classes too small to stratify go to test
//!
//! [model]
//! hidden = [32]
//! order = 3
//!
//! [optim]                        # every key optional; see Hyperparams::for_nodes
//! alpha = 0.2
//! lambda = 0.2
//! eta = 0.01
//! t_max = 30
//! tau_max = 5
//! step1_epochs = 50
//! step1_lr = 0.01
//!
//! [synthetic]                    # only read when dataset = "synthetic"
//! nodes = 60
//! ```
//!
//! For `subset-rewire`, each level is the fraction of nodes whose mutual
//! edges may be rewired.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::data::synthetic::SyntheticSpec;
use crate::data::RareClasses;
use crate::graph::ConstraintSet;
use crate::robust::{Architecture, Hyperparams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Weights and graph estimated jointly.
    Rgcnh,
    /// Weights only, on the observed graph.
    Gcnh,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Rgcnh => "rgcnh",
            Method::Gcnh => "gcnh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    UniformRewire,
    SubsetRewire,
}

impl SweepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::UniformRewire => "uniform-rewire",
            SweepKind::SubsetRewire => "subset-rewire",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    pub kind: SweepKind,
    pub levels: Vec<f64>,
    #[serde(default = "default_subset_probability")]
    pub subset_probability: f64,
    #[serde(default = "default_true")]
    pub prior_mask: bool,
}

fn default_subset_probability() -> f64 {
    0.5
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub fractions: [f64; 3],
    /// Number of distinct splits; realization `r` uses split `r % seeds`.
    pub seeds: usize,
    pub rare_classes: RareClasses,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            fractions: [0.48, 0.32, 0.20],
            seeds: 10,
            rare_classes: RareClasses::Reject,
        }
    }
}

/// Overrides on top of [`Hyperparams::for_nodes`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimConfig {
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub eta: Option<f64>,
    pub t_max: Option<usize>,
    pub tau_max: Option<usize>,
    pub step1_epochs: Option<usize>,
    pub step1_lr: Option<f64>,
    pub constraint: Option<ConstraintSet>,
}

impl OptimConfig {
    pub fn resolve(&self, n: usize) -> Hyperparams {
        let d = Hyperparams::for_nodes(n);
        Hyperparams {
            alpha: self.alpha.unwrap_or(d.alpha),
            lambda: self.lambda.unwrap_or(d.lambda),
            eta: self.eta.unwrap_or(d.eta),
            t_max: self.t_max.unwrap_or(d.t_max),
            tau_max: self.tau_max.unwrap_or(d.tau_max),
            step1_epochs: self.step1_epochs.unwrap_or(d.step1_epochs),
            step1_lr: self.step1_lr.unwrap_or(d.step1_lr),
            prox_mask: None,
            constraint: self.constraint.unwrap_or(d.constraint),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub methods: Vec<Method>,
    pub realizations: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default = "default_true")]
    pub normalize_features: bool,
    /// Per-trial checkpoint, graph and trace files are written here if set.
    #[serde(default)]
    pub artifacts_dir: Option<PathBuf>,
    pub perturbation: PerturbationConfig,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub model: Architecture,
    #[serde(default)]
    pub optim: OptimConfig,
    #[serde(default)]
    pub synthetic: Option<SyntheticSpec>,
    /// The text this config was parsed from, echoed into result files.
    #[serde(skip)]
    pub source: String,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        cfg.source = text.to_string();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.realizations == 0 {
            return bad("realizations must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("methods must not be empty".into());
        }
        if self.perturbation.levels.is_empty() {
            return bad("perturbation.levels must not be empty".into());
        }
        if let Some(p) = self.perturbation.levels.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return bad(format!("perturbation level {p} outside [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.perturbation.subset_probability) {
            return bad(format!(
                "subset_probability {} outside [0, 1]",
                self.perturbation.subset_probability
            ));
        }
        if self.split.seeds == 0 {
            return bad("split.seeds must be at least 1".into());
        }
        if self.model.order == 0 || self.model.hidden.contains(&0) {
            return bad("model.order and hidden widths must be positive".into());
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(m) = self.methods.iter().find(|m| !seen.insert(**m)) {
            return bad(format!("method {} listed twice", m.as_str()));
        }
        Ok(())
    }

    pub fn is_synthetic(&self) -> bool {
        self.dataset.eq_ignore_ascii_case("synthetic")
    }
}
