//! Planted-partition graphs with class-correlated bag-of-words features.
//!
//! Used by tests and as a stand-in dataset for exercising the experiment
//! harness without the WebKB files.

use ndarray::Array2;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{DataError, Dataset};
use crate::gnn::LabeledTargets;
use crate::graph::Gso;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub nodes: usize,
    pub classes: usize,
    /// Vocabulary size; each class owns an equal contiguous block of words.
    pub features: usize,
    /// Edge probability between nodes of the same class.
    pub p_in: f64,
    /// Edge probability between nodes of different classes.
    pub p_out: f64,
    /// Probability that a node uses a given word of its own class block.
    pub word_in: f64,
    /// Probability that a node uses any other word.
    pub word_out: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            nodes: 60,
            classes: 3,
            features: 30,
            p_in: 0.2,
            p_out: 0.02,
            word_in: 0.15,
            word_out: 0.08,
            seed: 0,
        }
    }
}

/// Draws a dataset. Node `i` belongs to class `i % classes`.
pub fn generate(spec: &SyntheticSpec) -> Result<Dataset, DataError> {
    if spec.classes == 0 || spec.nodes < spec.classes || spec.features < spec.classes {
        return Err(DataError::Inconsistent(format!(
            "synthetic spec needs nodes >= classes and features >= classes: {spec:?}"
        )));
    }
    for p in [spec.p_in, spec.p_out, spec.word_in, spec.word_out] {
        if !(0.0..=1.0).contains(&p) {
            return Err(DataError::Inconsistent(format!("probability {p} outside [0, 1]")));
        }
    }
    let mut rng = rng::seeded(spec.seed);
    let n = spec.nodes;
    let labels: Vec<usize> = (0..n).map(|i| i % spec.classes).collect();
    let block = spec.features / spec.classes;
    let mut features = Array2::zeros((n, spec.features));
    for i in 0..n {
        for j in 0..spec.features {
            let own = (j / block.max(1)).min(spec.classes - 1) == labels[i];
            let p = if own { spec.word_in } else { spec.word_out };
            if rng.random_bool(p) {
                features[[i, j]] = 1.0;
            }
        }
    }
    let mut adj = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if labels[i] == labels[j] { spec.p_in } else { spec.p_out };
            if rng.random_bool(p) {
                adj[[i, j]] = 1.0;
                adj[[j, i]] = 1.0;
            }
        }
    }
    let targets = LabeledTargets::unsplit(labels, spec.classes)?;
    Dataset::new("synthetic".into(), features, targets, Gso::new(adj)?)
}

/// Writes `d` in the WebKB two-file layout under `dir`.
pub fn write_webkb(d: &Dataset, dir: &std::path::Path) -> std::io::Result<()> {
    use std::fmt::Write as _;
    std::fs::create_dir_all(dir)?;
    let mut nodes = String::from("node_id\tfeature\tlabel\n");
    for i in 0..d.num_nodes() {
        let feats: Vec<String> = d.features.row(i).iter().map(|v| v.to_string()).collect();
        writeln!(nodes, "{i}\t{}\t{}", feats.join(","), d.targets.labels()[i]).unwrap();
    }
    let mut edges = String::from("node_id\tnode_id\n");
    for (i, j, _) in d.adjacency.edges() {
        writeln!(edges, "{i}\t{j}").unwrap();
    }
    std::fs::write(dir.join(super::NODE_FILE), nodes)?;
    std::fs::write(dir.join(super::EDGE_FILE), edges)
}
