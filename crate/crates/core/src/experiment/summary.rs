use std::collections::BTreeMap;

use super::stats::{mean, sample_sd, sign_test_p};
use super::ResultRow;

/// Test-accuracy statistics of one (dataset, method, level) cell. Failed
/// trials are counted but excluded from the statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub method: String,
    pub pert_level: f64,
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub errors: usize,
}

type CellKey = (String, String, u64);

/// Ordered by dataset, method and increasing level.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut cells: BTreeMap<CellKey, (Vec<f64>, usize)> = BTreeMap::new();
    for r in rows {
        let cell = cells
            .entry((r.dataset.clone(), r.method.clone(), level_key(r.pert_level)))
            .or_default();
        if r.failed() {
            cell.1 += 1;
        } else {
            cell.0.push(r.test_acc);
        }
    }
    cells
        .into_iter()
        .map(|((dataset, method, level), (accs, errors))| SummaryRow {
            dataset,
            method,
            pert_level: f64::from_bits(level),
            n: accs.len(),
            mean: mean(&accs),
            sd: sample_sd(&accs),
            errors,
        })
        .collect()
}

/// Levels are non-negative, so their bit patterns sort like the values.
fn level_key(level: f64) -> u64 {
    (level + 0.0).to_bits()
}

/// Paired test accuracies of two methods at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedComparison {
    pub dataset: String,
    pub pert_level: f64,
    pub pairs: usize,
    /// Mean of `a - b` over realizations where both succeeded.
    pub mean_diff: f64,
    pub wins: usize,
    pub losses: usize,
    pub ties: usize,
    /// One-sided sign-test p-value for `a > b`, ties dropped.
    pub p_value: f64,
}

type Pair = (Option<f64>, Option<f64>);

pub fn paired_comparison(rows: &[ResultRow], a: &str, b: &str) -> Vec<PairedComparison> {
    let mut by_trial: BTreeMap<(String, u64, usize), Pair> = BTreeMap::new();
    for r in rows.iter().filter(|r| !r.failed()) {
        let slot = by_trial
            .entry((r.dataset.clone(), level_key(r.pert_level), r.realization))
            .or_default();
        if r.method == a {
            slot.0 = Some(r.test_acc);
        } else if r.method == b {
            slot.1 = Some(r.test_acc);
        }
    }
    let mut cells: BTreeMap<(String, u64), Vec<f64>> = BTreeMap::new();
    for ((dataset, level, _), pair) in by_trial {
        if let (Some(x), Some(y)) = pair {
            cells.entry((dataset, level)).or_default().push(x - y);
        }
    }
    cells
        .into_iter()
        .map(|((dataset, level), diffs)| {
            let wins = diffs.iter().filter(|&&d| d > 0.0).count();
            let losses = diffs.iter().filter(|&&d| d < 0.0).count();
            PairedComparison {
                dataset,
                pert_level: f64::from_bits(level),
                pairs: diffs.len(),
                mean_diff: mean(&diffs),
                wins,
                losses,
                ties: diffs.len() - wins - losses,
                p_value: sign_test_p(wins, losses),
            }
        })
        .collect()
}
