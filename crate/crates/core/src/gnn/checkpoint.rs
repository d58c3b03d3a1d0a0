//! Text checkpoints for [`GnnParams`].
//!
//! ```text
//! rgnn-params v1
//! <L> <R>
//! <F_0> <F_1> ... <F_L>
//! <row 0 of Theta_{1,0}>
//! ...
//! ```
//!
//! Matrices follow in layer-major, tap-minor order, one row per line,
//! values space separated in shortest round-trip decimal form.

use std::io::{BufRead, Write};

use ndarray::Array2;

use super::{GnnParams, ModelError};

const MAGIC: &str = "rgnn-params v1";

pub fn write_checkpoint<W: Write>(params: &GnnParams, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "{} {}", params.num_layers(), params.order())?;
    let dims: Vec<String> = params.dims().iter().map(|d| d.to_string()).collect();
    writeln!(out, "{}", dims.join(" "))?;
    for m in params.matrices() {
        for row in m.outer_iter() {
            let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", vals.join(" "))?;
        }
    }
    Ok(())
}

pub fn read_checkpoint<R: BufRead>(input: R) -> Result<GnnParams, ModelError> {
    let mut lines = input.lines().enumerate();
    let mut next = |what: &str| -> Result<(usize, String), ModelError> {
        match lines.next() {
            Some((i, Ok(l))) => Ok((i + 1, l)),
            Some((i, Err(e))) => Err(ModelError::Checkpoint(format!("line {}: {e}", i + 1))),
            None => Err(ModelError::Checkpoint(format!("unexpected end of file reading {what}"))),
        }
    };
    let (_, magic) = next("header")?;
    if magic.trim() != MAGIC {
        return Err(ModelError::Checkpoint(format!("bad header {magic:?}")));
    }
    let (ln, lr) = next("layer count")?;
    let lr = parse_usizes(&lr, ln)?;
    if lr.len() != 2 {
        return Err(ModelError::Checkpoint(format!("line {ln}: expected `L R`")));
    }
    let (depth, order) = (lr[0], lr[1]);
    let (ln, dims) = next("dims")?;
    let dims = parse_usizes(&dims, ln)?;
    if dims.len() != depth + 1 {
        return Err(ModelError::Checkpoint(format!(
            "line {ln}: {} dims for {depth} layers",
            dims.len()
        )));
    }
    let mut layers = Vec::with_capacity(depth);
    for l in 0..depth {
        let mut taps = Vec::with_capacity(order);
        for _ in 0..order {
            let mut m = Array2::zeros((dims[l], dims[l + 1]));
            for i in 0..dims[l] {
                let (ln, row) = next("matrix row")?;
                let vals: Vec<f64> = row
                    .split_whitespace()
                    .map(|t| t.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| ModelError::Checkpoint(format!("line {ln}: {e}")))?;
                if vals.len() != dims[l + 1] {
                    return Err(ModelError::Checkpoint(format!(
                        "line {ln}: {} values, expected {}",
                        vals.len(),
                        dims[l + 1]
                    )));
                }
                for (j, v) in vals.into_iter().enumerate() {
                    m[[i, j]] = v;
                }
            }
            taps.push(m);
        }
        layers.push(taps);
    }
    GnnParams::new(dims, order, layers)
}

fn parse_usizes(line: &str, ln: usize) -> Result<Vec<usize>, ModelError> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| ModelError::Checkpoint(format!("line {ln}: {e}")))
}
