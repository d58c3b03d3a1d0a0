//! Reader for the WebKB node-classification graphs.
//!
//! A dataset named `cornell` lives in `<root>/cornell/` as two files:
//!
//! * `out1_node_feature_label.txt`: one node per line,
//!   `node_id <TAB> f_1 ... f_F <TAB> label`. Features may be separated by
//!   commas or whitespace.
//! * `out1_graph_edges.txt`: one directed hyperlink per line, `src <TAB> dst`.
//!
//! Either file may start with a header line whose first field is not an
//! integer. Node ids must cover `0..N` exactly once. Labels that are all
//! non-negative integers are used as class indices directly; otherwise the
//! distinct label strings are sorted and numbered in that order. Edges are
//! symmetrized, self-loops dropped and weights set to one.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;

use super::{DataError, Dataset};
use crate::gnn::LabeledTargets;
use crate::graph::Gso;

pub const NODE_FILE: &str = "out1_node_feature_label.txt";
pub const EDGE_FILE: &str = "out1_graph_edges.txt";

pub fn dataset_dir(root: &Path, name: &str) -> PathBuf {
    root.join(name.to_ascii_lowercase())
}

pub fn load_webkb(root: &Path, name: &str) -> Result<Dataset, DataError> {
    let dir = dataset_dir(root, name);
    let node_path = dir.join(NODE_FILE);
    let edge_path = dir.join(EDGE_FILE);
    let nodes = read(&node_path)?;
    let edges = read(&edge_path)?;
    parse_webkb(name, &nodes, &edges).map_err(|e| e.in_file(&node_path, &edge_path))
}

fn read(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path).map_err(|e| DataError::Missing {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Parses the two file bodies. Errors carry line numbers but no path.
pub fn parse_webkb(name: &str, nodes: &str, edges: &str) -> Result<Dataset, DataError> {
    let rows = parse_nodes(nodes)?;
    let n = rows.len();
    let width = rows[0].1.len();

    let mut by_id: Vec<Option<usize>> = vec![None; n];
    for (idx, &(id, _, _, line)) in rows.iter().enumerate() {
        if id >= n {
            return Err(DataError::node_line(line, format!("node id {id} outside 0..{n}")));
        }
        if by_id[id].is_some() {
            return Err(DataError::node_line(line, format!("duplicate node id {id}")));
        }
        by_id[id] = Some(idx);
    }

    let label_index = label_mapping(&rows)?;
    let num_classes = label_index.num_classes();
    let mut features = Array2::zeros((n, width));
    let mut labels = vec![0usize; n];
    for (id, slot) in by_id.iter().enumerate() {
        let row = &rows[slot.expect("ids cover 0..n by pigeonhole")];
        for (j, &v) in row.1.iter().enumerate() {
            features[[id, j]] = v;
        }
        labels[id] = label_index.index(&row.2);
    }

    let adjacency = parse_edges(edges, n)?;
    if adjacency.edge_count() == 0 {
        log::warn!("dataset {name}: edge file has no edges");
    }
    let targets = LabeledTargets::unsplit(labels, num_classes)?;
    Dataset::new(name.to_string(), features, targets, adjacency)
}

type NodeRow = (usize, Vec<f64>, String, usize);

fn parse_nodes(text: &str) -> Result<Vec<NodeRow>, DataError> {
    let mut rows: Vec<NodeRow> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 3 {
            return Err(DataError::node_line(
                line,
                format!("expected 3 tab-separated fields, got {}", fields.len()),
            ));
        }
        let id = match fields[0].trim().parse::<usize>() {
            Ok(id) => id,
            Err(_) if rows.is_empty() && idx == 0 => continue,
            Err(_) => return Err(DataError::node_line(line, format!("bad node id {:?}", fields[0]))),
        };
        let feats: Vec<f64> = fields[1]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| DataError::node_line(line, format!("bad feature: {e}")))?;
        if let Some(v) = feats.iter().find(|v| !v.is_finite()) {
            return Err(DataError::node_line(line, format!("non-finite feature {v}")));
        }
        if let Some(first) = rows.first() {
            if feats.len() != first.1.len() {
                return Err(DataError::node_line(
                    line,
                    format!("{} features, earlier rows have {}", feats.len(), first.1.len()),
                ));
            }
        }
        let label = fields[2].trim();
        if label.is_empty() {
            return Err(DataError::node_line(line, "missing label".into()));
        }
        rows.push((id, feats, label.to_string(), line));
    }
    if rows.is_empty() {
        return Err(DataError::node_line(0, "no nodes".into()));
    }
    if rows[0].1.is_empty() {
        return Err(DataError::node_line(rows[0].3, "no features".into()));
    }
    Ok(rows)
}

enum Labels {
    Numeric(usize),
    Named(Vec<String>),
}

impl Labels {
    fn num_classes(&self) -> usize {
        match self {
            Labels::Numeric(c) => *c,
            Labels::Named(names) => names.len(),
        }
    }

    fn index(&self, label: &str) -> usize {
        match self {
            Labels::Numeric(_) => label.parse().expect("validated numeric"),
            Labels::Named(names) => names.binary_search_by(|n| n.as_str().cmp(label)).expect("collected"),
        }
    }
}

fn label_mapping(rows: &[NodeRow]) -> Result<Labels, DataError> {
    let numeric: Vec<Option<i64>> = rows.iter().map(|r| r.2.parse::<i64>().ok()).collect();
    if numeric.iter().all(Option::is_some) {
        let mut max = 0;
        for (row, v) in rows.iter().zip(&numeric) {
            let v = v.expect("checked");
            if v < 0 {
                return Err(DataError::node_line(row.3, format!("label {v} out of range")));
            }
            max = max.max(v as usize);
        }
        return Ok(Labels::Numeric(max + 1));
    }
    let names: BTreeSet<String> = rows.iter().map(|r| r.2.clone()).collect();
    Ok(Labels::Named(names.into_iter().collect()))
}

fn parse_edges(text: &str, n: usize) -> Result<Gso, DataError> {
    let mut m = Array2::zeros((n, n));
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let parsed: Result<Vec<usize>, _> = fields.iter().map(|f| f.parse::<usize>()).collect();
        let ends = match parsed {
            Ok(v) if v.len() == 2 => v,
            Err(_) if idx == 0 => continue,
            _ => return Err(DataError::edge_line(line, format!("expected `src dst`, got {raw:?}"))),
        };
        let (i, j) = (ends[0], ends[1]);
        if i >= n || j >= n {
            return Err(DataError::edge_line(line, format!("node {} outside 0..{n}", i.max(j))));
        }
        if i != j {
            m[[i, j]] = 1.0;
            m[[j, i]] = 1.0;
        }
    }
    Ok(Gso::new(m)?)
}
