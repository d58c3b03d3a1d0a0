//! Edge-rewiring perturbations.
//!
//! A rewiring of level `p` removes `k = round(p * |E|)` existing undirected
//! edges and adds `k` node pairs that were absent in the input, so the edge
//! count is preserved and every rewired edge touches exactly four entries of
//! the full matrix. Removal and addition targets are drawn without
//! replacement from the pairs of the *input* graph, in that order, from a
//! single seeded stream.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::{GraphError, Gso};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    UniformRewire,
    SubsetRewire { subset: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub kind: PerturbationKind,
    pub probability: f64,
    pub seed: u64,
}

/// One entry of the perturbation matrix, stored once per undirected pair
/// (`i < j`). `delta` is `+1` for a created edge and `-1` for a removed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeChange {
    pub i: usize,
    pub j: usize,
    pub delta: i8,
}

pub type Perturbed = (Gso, Vec<EdgeChange>);

pub fn perturb(s: &Gso, spec: &PerturbationSpec) -> Result<Perturbed, GraphError> {
    match &spec.kind {
        PerturbationKind::UniformRewire => rewire_edges(s, spec.probability, spec.seed),
        PerturbationKind::SubsetRewire { subset } => subset_rewire(s, subset, spec.probability, spec.seed),
    }
}

/// Rewires a fraction `p` of all edges of `s`.
pub fn rewire_edges(s: &Gso, p: f64, seed: u64) -> Result<Perturbed, GraphError> {
    check_probability(p)?;
    let members: Vec<usize> = (0..s.n()).collect();
    rewire_among(s, &members, p, seed)
}

/// Rewires a fraction `p` of the edges whose endpoints both lie in `subset`.
/// New edges are also confined to `subset`, so entries outside the
/// `subset x subset` block are left untouched.
pub fn subset_rewire(s: &Gso, subset: &[usize], p: f64, seed: u64) -> Result<Perturbed, GraphError> {
    check_probability(p)?;
    if subset.is_empty() {
        return Err(GraphError::EmptySubset);
    }
    let n = s.n();
    if let Some(&node) = subset.iter().find(|&&v| v >= n) {
        return Err(GraphError::NodeOutOfRange { node, n });
    }
    let mut members = subset.to_vec();
    members.sort_unstable();
    members.dedup();
    let induced = pairs(&members).filter(|&(i, j)| s.has_edge(i, j)).count();
    if induced == 0 && p > 0.0 {
        return Err(GraphError::NoEdgesInSubset);
    }
    rewire_among(s, &members, p, seed)
}

fn check_probability(p: f64) -> Result<(), GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    Ok(())
}

fn pairs(members: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    members
        .iter()
        .enumerate()
        .flat_map(move |(a, &i)| members[a + 1..].iter().map(move |&j| (i, j)))
}

fn rewire_among(s: &Gso, members: &[usize], p: f64, seed: u64) -> Result<Perturbed, GraphError> {
    let (present, absent): (Vec<_>, Vec<_>) = pairs(members).partition(|&(i, j)| s.has_edge(i, j));
    let k = (p * present.len() as f64).round() as usize;
    if k > absent.len() {
        return Err(GraphError::TooDense {
            requested: k,
            available: absent.len(),
        });
    }

    let mut rng = rng::seeded(seed);
    let mut removed = index::sample(&mut rng, present.len(), k).into_vec();
    let mut added = index::sample(&mut rng, absent.len(), k).into_vec();
    removed.sort_unstable();
    added.sort_unstable();

    let mut entries = s.entries().clone();
    let mut changes = Vec::with_capacity(2 * k);
    for idx in removed {
        let (i, j) = present[idx];
        entries[[i, j]] = 0.0;
        entries[[j, i]] = 0.0;
        changes.push(EdgeChange { i, j, delta: -1 });
    }
    for idx in added {
        let (i, j) = absent[idx];
        entries[[i, j]] = 1.0;
        entries[[j, i]] = 1.0;
        changes.push(EdgeChange { i, j, delta: 1 });
    }
    Ok((Gso::new(entries)?, changes))
}
