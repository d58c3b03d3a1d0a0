//! Result files: a `#`-prefixed header block followed by CSV.
//!
//! The header echoes the config verbatim, the resolved hyperparameters and
//! the dataset counts, so every row can be traced back to its settings. A
//! failed trial is written as a row with `NaN` metrics followed by a
//! `# error:` line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ExperimentError};
use crate::data::DatasetCounts;
use crate::robust::Hyperparams;

pub const COLUMNS: [&str; 9] = [
    "dataset",
    "method",
    "pert_kind",
    "pert_level",
    "realization",
    "test_acc",
    "val_acc",
    "graph_err",
    "seconds",
];

/// One trial of one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub method: String,
    pub pert_kind: String,
    pub pert_level: f64,
    pub realization: usize,
    /// In `[0, 1]`, or `NaN` for a failed trial.
    pub test_acc: f64,
    pub val_acc: f64,
    pub graph_err: f64,
    pub seconds: f64,
    /// Diagnostics of a failed trial; not a CSV column.
    #[serde(skip)]
    pub error: Option<String>,
    /// SHA-256 of the observed graph this trial was trained on; not a CSV column.
    #[serde(skip)]
    pub sbar_digest: [u8; 32],
}

impl ResultRow {
    pub fn failed(&self) -> bool {
        self.error.is_some() || self.test_acc.is_nan()
    }
}

pub fn write_header<W: Write>(
    out: &mut W,
    config: &ExperimentConfig,
    hp: &Hyperparams,
    counts: &DatasetCounts,
) -> Result<(), ExperimentError> {
    writeln!(out, "# rgnn results v1")?;
    writeln!(out, "# config:")?;
    for line in config.source.lines() {
        writeln!(out, "#   {line}")?;
    }
    writeln!(
        out,
        "# hyperparameters: alpha={} lambda={} eta={} t_max={} tau_max={} step1_epochs={} step1_lr={} \
         constraint=[{}, {}] symmetric={} zero_diagonal={} hidden={:?} order={}",
        hp.alpha,
        hp.lambda,
        hp.eta,
        hp.t_max,
        hp.tau_max,
        hp.step1_epochs,
        hp.step1_lr,
        hp.constraint.lower,
        hp.constraint.upper,
        hp.constraint.force_symmetric,
        hp.constraint.force_zero_diagonal,
        config.model.hidden,
        config.model.order,
    )?;
    let show = |v: Option<usize>| v.map_or_else(|| "?".to_string(), |v| v.to_string());
    writeln!(
        out,
        "# dataset: {} nodes={} features={} classes={} edges={}",
        config.dataset,
        show(counts.nodes),
        show(counts.features),
        show(counts.classes),
        show(counts.edges)
    )?;
    writeln!(out, "{}", COLUMNS.join(","))?;
    Ok(())
}

/// Appends one row, plus its `# error:` line if the trial failed.
pub fn write_row<W: Write>(out: &mut W, row: &ResultRow) -> Result<(), ExperimentError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.serialize(row)?;
    let bytes = w.into_inner().map_err(|e| ExperimentError::Results(e.to_string()))?;
    out.write_all(&bytes)?;
    if let Some(err) = &row.error {
        writeln!(out, "# error: {}", err.replace('\n', " "))?;
    }
    Ok(())
}

/// Reads the rows of a results file. `# error:` lines are attached to the
/// row preceding them.
pub fn read_results<R: BufRead>(input: R) -> Result<Vec<ResultRow>, ExperimentError> {
    let mut rows: Vec<ResultRow> = Vec::new();
    let mut header_seen = false;
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let bad = |msg: String| ExperimentError::Results(format!("line {}: {msg}", idx + 1));
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(msg) = rest.trim_start().strip_prefix("error:") {
                let row = rows.last_mut().ok_or_else(|| bad("error line before any row".into()))?;
                row.error = Some(msg.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line.trim() != COLUMNS.join(",") {
                return Err(bad(format!("expected column header {:?}", COLUMNS.join(","))));
            }
            header_seen = true;
            continue;
        }
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(line.as_bytes());
        let mut it = r.deserialize::<ResultRow>();
        let row = it
            .next()
            .ok_or_else(|| bad("empty record".into()))?
            .map_err(|e| bad(e.to_string()))?;
        rows.push(row);
    }
    if !header_seen {
        return Err(ExperimentError::Results("no column header".into()));
    }
    Ok(rows)
}
