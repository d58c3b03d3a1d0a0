//! Recorded dataset sizes, kept as a plain `key = value` file:
//!
//! ```text
//! # comment
//! cornell.nodes = 183
//! cornell.features = 1703
//! cornell.classes = 5
//! cornell.edges = 280
//! ```
//!
//! Any subset of the four counts may be recorded per dataset; only
//! recorded counts are checked.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{DataError, Dataset};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DatasetCounts {
    pub nodes: Option<usize>,
    pub features: Option<usize>,
    pub classes: Option<usize>,
    /// Undirected edges after symmetrization and self-loop removal.
    pub edges: Option<usize>,
}

impl DatasetCounts {
    pub fn of(d: &Dataset) -> Self {
        Self {
            nodes: Some(d.num_nodes()),
            features: Some(d.num_features()),
            classes: Some(d.targets.num_classes()),
            edges: Some(d.adjacency.edge_count()),
        }
    }

    fn fields(&self) -> [(&'static str, Option<usize>); 4] {
        [
            ("nodes", self.nodes),
            ("features", self.features),
            ("classes", self.classes),
            ("edges", self.edges),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub datasets: BTreeMap<String, DatasetCounts>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self, DataError> {
        let mut datasets: BTreeMap<String, DatasetCounts> = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| DataError::Manifest(format!("line {}: {msg}", idx + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected `name.field = value`"))?;
            let (name, field) = key
                .trim()
                .split_once('.')
                .ok_or_else(|| bad("key needs a dataset prefix"))?;
            let value: usize = value.trim().parse().map_err(|_| bad("value is not a count"))?;
            let entry = datasets.entry(name.to_ascii_lowercase()).or_default();
            match field {
                "nodes" => entry.nodes = Some(value),
                "features" => entry.features = Some(value),
                "classes" => entry.classes = Some(value),
                "edges" => entry.edges = Some(value),
                other => return Err(bad(&format!("unknown field {other:?}"))),
            }
        }
        Ok(Self { datasets })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, counts) in &self.datasets {
            for (field, v) in counts.fields() {
                if let Some(v) = v {
                    writeln!(out, "{name}.{field} = {v}").unwrap();
                }
            }
        }
        out
    }

    pub fn get(&self, name: &str) -> Option<&DatasetCounts> {
        self.datasets.get(&name.to_ascii_lowercase())
    }

    /// Compares a freshly loaded dataset against the recorded counts.
    pub fn check(&self, d: &Dataset) -> Result<(), DataError> {
        let Some(recorded) = self.get(&d.name) else {
            return Err(DataError::Manifest(format!("no entry for {}", d.name)));
        };
        let actual = DatasetCounts::of(d);
        for ((field, want), (_, got)) in recorded.fields().into_iter().zip(actual.fields()) {
            if let Some(want) = want {
                if Some(want) != got {
                    return Err(DataError::Manifest(format!(
                        "{}.{field}: recorded {want}, loaded {}",
                        d.name,
                        got.unwrap_or(0)
                    )));
                }
            }
        }
        Ok(())
    }
}
