//! Sweep execution.
//!
//! For level index `l` and realization `r` the observed graph is drawn once
//! from seeds derived with roles `perturb` and `subset`, and every listed
//! method is trained on that same graph from the `init` seed, so
//! comparisons between methods are paired. Realization `r` uses split
//! `r % split.seeds` at every level. Realizations of one level run in
//! parallel; rows are emitted in (level, realization, method) order.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::seq::index;
use rayon::prelude::*;

use super::seeds::{derive_seed, matrix_digest, ROLE_INIT, ROLE_PERTURB, ROLE_SPLIT, ROLE_SUBSET};
use super::{write_header, write_row, ExperimentConfig, ExperimentError, Method, ResultRow, SweepKind};
use crate::data::{self, make_splits_with, normalize_features, synthetic, Dataset, DatasetCounts, Manifest};
use crate::gnn::{forward, LabeledTargets, Split};
use crate::graph::{rewire_edges, subset_rewire, GraphError, Gso};
use crate::metrics::{accuracy, graph_recovery_error};
use crate::rng;
use crate::robust::{train_robust, Hyperparams, ProxMask};

/// Name of the optional count manifest inside the data root.
pub const MANIFEST_FILE: &str = "manifest.txt";

/// Loads the dataset named by the config: generated for `synthetic`, read
/// from `root` otherwise and checked against `root/manifest.txt` when that
/// file has an entry for it. Features are L1-normalized if the config asks for it.
pub fn load_dataset(config: &ExperimentConfig, root: &Path) -> Result<Dataset, ExperimentError> {
    let mut d = if config.is_synthetic() {
        synthetic::generate(&config.synthetic.clone().unwrap_or_default())?
    } else {
        let d = data::load_webkb(root, &config.dataset)?;
        let manifest_path = root.join(MANIFEST_FILE);
        if manifest_path.exists() {
            let manifest = Manifest::parse(&std::fs::read_to_string(&manifest_path)?)?;
            if manifest.get(&d.name).is_some() {
                manifest.check(&d)?;
            }
        }
        d
    };
    if config.normalize_features {
        d.features = normalize_features(&d.features);
    }
    Ok(d)
}

/// The observed graph of one (level, realization) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub sbar: Gso,
    /// Distance-prox restriction for the robust method.
    pub mask: Option<ProxMask>,
    pub digest: [u8; 32],
}

pub fn observe(
    config: &ExperimentConfig,
    adjacency: &Gso,
    level_index: usize,
    realization: usize,
) -> Result<Observation, ExperimentError> {
    let (l, r) = (level_index as u64, realization as u64);
    let level = config.perturbation.levels[level_index];
    let perturb_seed = derive_seed(config.base_seed, ROLE_PERTURB, l, r);
    let (sbar, mask) = match config.perturbation.kind {
        SweepKind::UniformRewire => (rewire_edges(adjacency, level, perturb_seed)?.0, None),
        SweepKind::SubsetRewire => {
            let n = adjacency.n();
            let size = (level * n as f64).round() as usize;
            let mut rng = rng::seeded(derive_seed(config.base_seed, ROLE_SUBSET, l, r));
            let mut subset = index::sample(&mut rng, n, size).into_vec();
            subset.sort_unstable();
            let sbar = if subset.is_empty() {
                adjacency.clone()
            } else {
                match subset_rewire(adjacency, &subset, config.perturbation.subset_probability, perturb_seed) {
                    Ok((g, _)) => g,
                    Err(GraphError::NoEdgesInSubset) => {
                        log::debug!("level {level} realization {realization}: subset induces no edges");
                        adjacency.clone()
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            let mask = if config.perturbation.prior_mask {
                Some(ProxMask::from_subset(n, &subset)?)
            } else {
                None
            };
            (sbar, mask)
        }
    };
    let digest = matrix_digest(sbar.entries());
    Ok(Observation { sbar, mask, digest })
}

/// Splits used by realization `r`.
pub fn realization_targets(
    config: &ExperimentConfig,
    dataset: &Dataset,
    realization: usize,
) -> Result<LabeledTargets, ExperimentError> {
    let slot = (realization % config.split.seeds) as u64;
    let seed = derive_seed(config.base_seed, ROLE_SPLIT, 0, slot);
    Ok(make_splits_with(
        &dataset.targets,
        config.split.fractions,
        seed,
        config.split.rare_classes,
    )?)
}

/// Hyperparameters of `method` for this dataset.
pub fn method_hyperparams(config: &ExperimentConfig, n: usize, method: Method, mask: Option<&ProxMask>) -> Hyperparams {
    let hp = config.optim.resolve(n);
    match method {
        Method::Rgcnh => Hyperparams {
            prox_mask: mask.cloned(),
            ..hp
        },
        Method::Gcnh => hp.baseline(),
    }
}

struct Trial {
    test_acc: f64,
    val_acc: f64,
    graph_err: f64,
}

/// Trains and evaluates one method on one observation. Failures are
/// returned as rows with `NaN` metrics and the error message attached.
#[allow(clippy::too_many_arguments)]
pub fn run_trial(
    config: &ExperimentConfig,
    dataset: &Dataset,
    targets: &LabeledTargets,
    obs: &Observation,
    method: Method,
    level_index: usize,
    realization: usize,
) -> ResultRow {
    let start = Instant::now();
    let outcome = train_and_score(config, dataset, targets, obs, method, level_index, realization);
    let seconds = if config.record_timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    };
    let mut row = ResultRow {
        dataset: dataset.name.clone(),
        method: method.as_str().to_string(),
        pert_kind: config.perturbation.kind.as_str().to_string(),
        pert_level: config.perturbation.levels[level_index],
        realization,
        test_acc: f64::NAN,
        val_acc: f64::NAN,
        graph_err: f64::NAN,
        seconds,
        error: None,
        sbar_digest: obs.digest,
    };
    match outcome {
        Ok(t) => {
            row.test_acc = t.test_acc;
            row.val_acc = t.val_acc;
            row.graph_err = t.graph_err;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

fn train_and_score(
    config: &ExperimentConfig,
    dataset: &Dataset,
    targets: &LabeledTargets,
    obs: &Observation,
    method: Method,
    level_index: usize,
    realization: usize,
) -> Result<Trial, ExperimentError> {
    let hp = method_hyperparams(config, dataset.num_nodes(), method, obs.mask.as_ref());
    let seed = derive_seed(config.base_seed, ROLE_INIT, level_index as u64, realization as u64);
    let x = dataset.features.view();
    let result = train_robust(x, targets, &obs.sbar, &config.model, &hp, seed)?;
    let (logits, _) = forward(x, result.s_hat.view(), &result.theta_hat)?;
    let test_acc = accuracy(logits.view(), targets, targets.mask(Split::Test))?;
    let val_acc = if targets.count(Split::Val) > 0 {
        accuracy(logits.view(), targets, targets.mask(Split::Val))?
    } else {
        f64::NAN
    };
    let graph_err = graph_recovery_error(&result.s_hat, &dataset.adjacency)?;
    if let Some(dir) = &config.artifacts_dir {
        result.save(&dir.join(format!("{}-l{level_index}-r{realization}", method.as_str())))?;
    }
    Ok(Trial {
        test_acc,
        val_acc,
        graph_err,
    })
}

fn run_realization(
    config: &ExperimentConfig,
    dataset: &Dataset,
    level_index: usize,
    realization: usize,
) -> Vec<ResultRow> {
    let prepared = realization_targets(config, dataset, realization)
        .and_then(|t| Ok((t, observe(config, &dataset.adjacency, level_index, realization)?)));
    match prepared {
        Ok((targets, obs)) => config
            .methods
            .iter()
            .map(|&m| run_trial(config, dataset, &targets, &obs, m, level_index, realization))
            .collect(),
        Err(e) => config
            .methods
            .iter()
            .map(|&m| ResultRow {
                dataset: dataset.name.clone(),
                method: m.as_str().to_string(),
                pert_kind: config.perturbation.kind.as_str().to_string(),
                pert_level: config.perturbation.levels[level_index],
                realization,
                test_acc: f64::NAN,
                val_acc: f64::NAN,
                graph_err: f64::NAN,
                seconds: 0.0,
                error: Some(e.to_string()),
                sbar_digest: [0; 32],
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<ResultRow>,
    pub errors: usize,
}

/// Runs the sweep and returns the rows without writing them.
pub fn run_experiment(
    config: &ExperimentConfig,
    dataset: &Dataset,
    jobs: usize,
) -> Result<Vec<ResultRow>, ExperimentError> {
    Ok(run_experiment_to(config, dataset, jobs, &mut std::io::sink())?.rows)
}

/// Runs the sweep, writing the header and then each level's rows to `out`
/// as soon as the level completes.
pub fn run_experiment_to<W: Write>(
    config: &ExperimentConfig,
    dataset: &Dataset,
    jobs: usize,
    out: &mut W,
) -> Result<SweepOutcome, ExperimentError> {
    config.validate()?;
    let hp = config.optim.resolve(dataset.num_nodes());
    hp.validate()?;
    write_header(out, config, &hp, &DatasetCounts::of(dataset))?;
    out.flush()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| ExperimentError::Config(format!("thread pool: {e}")))?;

    let mut rows = Vec::with_capacity(config.perturbation.levels.len() * config.realizations * config.methods.len());
    for (level_index, level) in config.perturbation.levels.iter().enumerate() {
        let level_rows: Vec<Vec<ResultRow>> = pool.install(|| {
            (0..config.realizations)
                .into_par_iter()
                .map(|r| run_realization(config, dataset, level_index, r))
                .collect()
        });
        for row in level_rows.into_iter().flatten() {
            if let Some(e) = &row.error {
                log::error!("{} level {level} realization {}: {e}", row.method, row.realization);
            }
            write_row(out, &row)?;
            rows.push(row);
        }
        out.flush()?;
        log::info!("{}: level {level} done", dataset.name);
    }
    let errors = rows.iter().filter(|r| r.failed()).count();
    Ok(SweepOutcome { rows, errors })
}
