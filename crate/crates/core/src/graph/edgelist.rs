//! Plain-text edge lists.
//!
//! One undirected edge per line as `i j w` with 0-based node indices and a
//! decimal weight. Lines starting with `#` are comments, except that a
//! leading `# nodes <N>` line fixes the node count so that isolated
//! trailing nodes survive a round trip. Without it the node count is one
//! past the largest index seen. Weights are written in shortest
//! round-trip form, so save/load is exact.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use ndarray::Array2;

use super::{GraphError, Gso};

pub fn write_edge_list<W: Write>(g: &Gso, mut out: W) -> std::io::Result<()> {
    let mut buf = String::new();
    writeln!(buf, "# nodes {}", g.n()).unwrap();
    for (i, j, w) in g.edges() {
        writeln!(buf, "{i} {j} {w}").unwrap();
    }
    out.write_all(buf.as_bytes())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Gso, GraphError> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| GraphError::Io(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(n) = rest.trim().strip_prefix("nodes") {
                let n = n.trim().parse().map_err(|_| GraphError::Parse {
                    line: lineno,
                    msg: format!("bad node count {n:?}"),
                })?;
                declared = Some(n);
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GraphError::Parse {
                line: lineno,
                msg: format!("expected `i j w`, got {} fields", fields.len()),
            });
        }
        let parse_idx = |s: &str| {
            s.parse::<usize>().map_err(|_| GraphError::Parse {
                line: lineno,
                msg: format!("bad node index {s:?}"),
            })
        };
        let i = parse_idx(fields[0])?;
        let j = parse_idx(fields[1])?;
        let w: f64 = fields[2].parse().map_err(|_| GraphError::Parse {
            line: lineno,
            msg: format!("bad weight {:?}", fields[2]),
        })?;
        edges.push((lineno, i, j, w));
    }

    let seen = edges.iter().map(|&(_, i, j, _)| i.max(j) + 1).max().unwrap_or(0);
    let n = declared.unwrap_or(seen);
    let mut m = Array2::zeros((n, n));
    for (lineno, i, j, w) in edges {
        if i >= n || j >= n {
            return Err(GraphError::Parse {
                line: lineno,
                msg: format!("node index {} exceeds declared count {n}", i.max(j)),
            });
        }
        m[[i, j]] = w;
        m[[j, i]] = w;
    }
    Gso::new(m)
}
