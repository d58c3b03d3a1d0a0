//! Node-classification datasets: loading, feature normalization,
//! stratified splits, the committed count manifest and a synthetic
//! generator for tests and demos.

mod features;
mod manifest;
mod splits;
pub mod synthetic;
mod webkb;

use std::path::{Path, PathBuf};

use ndarray::Array2;

pub use features::normalize_features;
pub use manifest::{DatasetCounts, Manifest};
pub use splits::{make_splits, make_splits_with, RareClasses};
pub use webkb::{dataset_dir, load_webkb, parse_webkb, EDGE_FILE, NODE_FILE};

use crate::gnn::{LabeledTargets, ModelError};
use crate::graph::{GraphError, Gso};

/// Environment variable naming the dataset root directory.
pub const DATA_ROOT_ENV: &str = "RGNN_DATA_ROOT";

/// The dataset root: `explicit` if given, else `$RGNN_DATA_ROOT`, else `./data`.
pub fn data_root(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(DATA_ROOT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("data"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub features: Array2<f64>,
    pub targets: LabeledTargets,
    pub adjacency: Gso,
}

impl Dataset {
    pub fn new(
        name: String,
        features: Array2<f64>,
        targets: LabeledTargets,
        adjacency: Gso,
    ) -> Result<Self, DataError> {
        let n = features.nrows();
        if targets.num_nodes() != n || adjacency.n() != n {
            return Err(DataError::Inconsistent(format!(
                "{n} feature rows, {} labels, {} adjacency nodes",
                targets.num_nodes(),
                adjacency.n()
            )));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(DataError::Inconsistent("non-finite feature".into()));
        }
        Ok(Self {
            name,
            features,
            targets,
            adjacency,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.features.nrows()
    }

    pub fn num_features(&self) -> usize {
        self.features.ncols()
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DataError {
    #[error("cannot read {}: {reason}", path.display())]
    Missing { path: PathBuf, reason: String },
    #[error("{file}:{line}: {msg}")]
    Malformed { file: String, line: usize, msg: String },
    #[error("inconsistent dataset: {0}")]
    Inconsistent(String),
    #[error("split: {0}")]
    Split(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl DataError {
    fn node_line(line: usize, msg: String) -> Self {
        DataError::Malformed {
            file: "nodes".into(),
            line,
            msg,
        }
    }

    fn edge_line(line: usize, msg: String) -> Self {
        DataError::Malformed {
            file: "edges".into(),
            line,
            msg,
        }
    }

    fn in_file(self, nodes: &Path, edges: &Path) -> Self {
        match self {
            DataError::Malformed { file, line, msg } => DataError::Malformed {
                file: if file == "nodes" {
                    nodes.display().to_string()
                } else {
                    edges.display().to_string()
                },
                line,
                msg,
            },
            other => other,
        }
    }
}
