use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::DataError;
use crate::gnn::LabeledTargets;
use crate::rng;

/// Stratified random train/validation/test assignment.
///
/// Within each class the members are shuffled and the first
/// `floor(f_train * n_c)` go to train, the next `floor(f_val * n_c)` to
/// validation. When the fractions sum to one the test split takes the rest
/// of the class, otherwise `floor(f_test * n_c)` and the remainder stays
/// unassigned.
pub fn make_splits(targets: &LabeledTargets, fractions: [f64; 3], seed: u64) -> Result<LabeledTargets, DataError> {
    make_splits_with(targets, fractions, seed, RareClasses::Reject)
}

/// What to do with a class that has fewer members than there are non-empty
/// split parts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RareClasses {
    #[default]
    Reject,
    /// Put all members in the test split.
    Test,
}

/// [`make_splits`] with an explicit policy for rare classes.
pub fn make_splits_with(
    targets: &LabeledTargets,
    fractions: [f64; 3],
    seed: u64,
    rare: RareClasses,
) -> Result<LabeledTargets, DataError> {
    if fractions.iter().any(|f| !(f.is_finite() && *f >= 0.0)) {
        return Err(DataError::Split(format!(
            "fractions must be non-negative, got {fractions:?}"
        )));
    }
    let total: f64 = fractions.iter().sum();
    if total <= 0.0 || total > 1.0 + 1e-9 {
        return Err(DataError::Split(format!(
            "fractions must sum to a value in (0, 1], got {total}"
        )));
    }
    let exhaustive = (total - 1.0).abs() <= 1e-9;
    let parts = fractions.iter().filter(|&&f| f > 0.0).count();

    let n = targets.num_nodes();
    let mut masks = [vec![false; n], vec![false; n], vec![false; n]];
    let mut rng = rng::seeded(seed);
    for class in 0..targets.num_classes() {
        let mut members: Vec<usize> = (0..n).filter(|&i| targets.labels()[i] == class).collect();
        if members.is_empty() {
            continue;
        }
        if members.len() < parts && rare == RareClasses::Test {
            for &node in &members {
                masks[2][node] = true;
            }
            continue;
        }
        if members.len() < parts {
            return Err(DataError::Split(format!(
                "class {class} has {} members, fewer than the {parts} split parts",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        let size = members.len();
        let take = |f: f64| (f * size as f64 + 1e-9).floor() as usize;
        let n_train = take(fractions[0]);
        let n_val = take(fractions[1]).min(size - n_train);
        let n_test = if exhaustive {
            size - n_train - n_val
        } else {
            take(fractions[2]).min(size - n_train - n_val)
        };
        let bounds = [n_train, n_train + n_val, n_train + n_val + n_test];
        for (pos, &node) in members.iter().enumerate() {
            if pos < bounds[0] {
                masks[0][node] = true;
            } else if pos < bounds[1] {
                masks[1][node] = true;
            } else if pos < bounds[2] {
                masks[2][node] = true;
            }
        }
    }
    let [train, val, test] = masks;
    Ok(targets.with_masks(train, val, test)?)
}
