//! Independent oracles and random instance generators shared by the
//! integration tests and the acceptance harness.

#![allow(dead_code)]

use ndarray::{Array2, ArrayView2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rgnn::gnn::{forward, masked_cross_entropy, GnnParams, LabeledTargets, Split};
use rgnn::graph::Gso;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.random_range(lo..hi))
}

/// Erdős–Rényi graph with edge probability `density`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Gso {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Gso::from_pairs(n, &pairs).unwrap()
}

/// Symmetric, zero-diagonal, entries in `[0, 1]`.
pub fn random_weighted_gso(rng: &mut ChaCha8Rng, n: usize) -> Gso {
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let w: f64 = rng.random_range(0.0..1.0);
            m[[i, j]] = w;
            m[[j, i]] = w;
        }
    }
    Gso::new(m).unwrap()
}

pub fn random_params(rng: &mut ChaCha8Rng, dims: &[usize], order: usize, scale: f64) -> GnnParams {
    let layers = dims
        .windows(2)
        .map(|w| {
            (0..order)
                .map(|_| uniform_matrix(rng, w[0], w[1], -scale, scale))
                .collect()
        })
        .collect();
    GnnParams::new(dims.to_vec(), order, layers).unwrap()
}

/// Labels uniform over `classes`; each node goes to train with
/// probability `train`, the rest split evenly between val and test. At least
/// one training node is guaranteed.
pub fn random_targets(rng: &mut ChaCha8Rng, n: usize, classes: usize, train: f64) -> LabeledTargets {
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
    let mut tr = vec![false; n];
    let mut va = vec![false; n];
    let mut te = vec![false; n];
    for i in 0..n {
        if rng.random_bool(train) {
            tr[i] = true;
        } else if rng.random_bool(0.5) {
            va[i] = true;
        } else {
            te[i] = true;
        }
    }
    if !tr.iter().any(|&b| b) {
        tr[0] = true;
        va[0] = false;
        te[0] = false;
    }
    LabeledTargets::new(labels, tr, va, te, classes).unwrap()
}

pub fn train_loss(x: ArrayView2<'_, f64>, s: ArrayView2<'_, f64>, theta: &GnnParams, t: &LabeledTargets) -> f64 {
    let (logits, _) = forward(x, s, theta).unwrap();
    masked_cross_entropy(logits.view(), t, t.mask(Split::Train)).unwrap()
}

/// Central-difference gradients of the training loss with respect to every
/// coefficient and every entry of `s` (entries perturbed one at a time,
/// without symmetrization).
pub fn finite_difference(
    x: ArrayView2<'_, f64>,
    s: &Array2<f64>,
    theta: &GnnParams,
    t: &LabeledTargets,
    h: f64,
) -> (GnnParams, Array2<f64>) {
    let mut g_theta = theta.zeros_like();
    let mut probe = theta.clone();
    for l in 0..theta.num_layers() {
        for r in 0..theta.order() {
            let (rows, cols) = theta.layer(l)[r].dim();
            for a in 0..rows {
                for b in 0..cols {
                    let orig = theta.layer(l)[r][[a, b]];
                    probe.layer_mut(l)[r][[a, b]] = orig + h;
                    let plus = train_loss(x, s.view(), &probe, t);
                    probe.layer_mut(l)[r][[a, b]] = orig - h;
                    let minus = train_loss(x, s.view(), &probe, t);
                    probe.layer_mut(l)[r][[a, b]] = orig;
                    g_theta.layer_mut(l)[r][[a, b]] = (plus - minus) / (2.0 * h);
                }
            }
        }
    }
    let n = s.nrows();
    let mut g_s = Array2::zeros((n, n));
    let mut sp = s.clone();
    for i in 0..n {
        for j in 0..n {
            let orig = s[[i, j]];
            sp[[i, j]] = orig + h;
            let plus = train_loss(x, sp.view(), theta, t);
            sp[[i, j]] = orig - h;
            let minus = train_loss(x, sp.view(), theta, t);
            sp[[i, j]] = orig;
            g_s[[i, j]] = (plus - minus) / (2.0 * h);
        }
    }
    (g_theta, g_s)
}

/// Absolute floor of the relative-error denominator. Coordinates whose true
/// gradient is below the floor are compared in absolute terms, so that
/// round-off in the difference quotient (about `1e-16 / h`) does not
/// dominate.
pub const REL_FLOOR: f64 = 1e-6;

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(REL_FLOOR)
}

/// Smallest distance of any hidden preactivation to the ReLU kink.
pub fn min_kink_distance(x: ArrayView2<'_, f64>, s: ArrayView2<'_, f64>, theta: &GnnParams) -> f64 {
    let (_, cache) = forward(x, s, theta).unwrap();
    let hidden = &cache.layers[..cache.layers.len() - 1];
    hidden
        .iter()
        .flat_map(|l| l.preactivation.iter())
        .fold(f64::INFINITY, |m, v| m.min(v.abs()))
}

pub struct GradCheck {
    pub theta_rel: f64,
    pub gso_rel: f64,
}

/// One random gradient-check instance with `N = 8`, dims `[4, 3, 2]`,
/// `R = 3`. Instances with a hidden preactivation within `kink` of zero are
/// redrawn.
pub fn gradient_check_instance(seed: u64, h: f64, kink: f64) -> GradCheck {
    let mut r = rng(seed);
    let (n, dims, order) = (8usize, [4usize, 3, 2], 3usize);
    loop {
        let x = uniform_matrix(&mut r, n, dims[0], -1.0, 1.0);
        // Unconstrained entries: the gradient treats S as a free matrix.
        let s = uniform_matrix(&mut r, n, n, -0.5, 0.5);
        let theta = random_params(&mut r, &dims, order, 0.8);
        let t = random_targets(&mut r, n, dims[2], 0.6);
        if min_kink_distance(x.view(), s.view(), &theta) < kink {
            continue;
        }
        let (_, cache) = forward(x.view(), s.view(), &theta).unwrap();
        let g = rgnn::gnn::backward(&cache, &theta, s.view(), &t, t.mask(Split::Train)).unwrap();
        let (fd_theta, fd_s) = finite_difference(x.view(), &s, &theta, &t, h);
        let theta_rel = g
            .theta
            .matrices()
            .zip(fd_theta.matrices())
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(&a, &b)| rel_err(a, b)).collect::<Vec<_>>())
            .fold(0.0, f64::max);
        let gso_rel = g
            .gso
            .iter()
            .zip(fd_s.iter())
            .map(|(&a, &b)| rel_err(a, b))
            .fold(0.0, f64::max);
        return GradCheck { theta_rel, gso_rel };
    }
}

/// Minimizer of a convex scalar function on `[lo, hi]` by a coarse grid
/// followed by a fine grid around the coarse winner.
pub fn grid_argmin(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let scan = |lo: f64, hi: f64, steps: usize| {
        let mut best = (f64::INFINITY, lo);
        for k in 0..=steps {
            let u = lo + (hi - lo) * k as f64 / steps as f64;
            let v = f(u);
            if v < best.0 {
                best = (v, u);
            }
        }
        best.1
    };
    let coarse_steps = 2000;
    let u = scan(lo, hi, coarse_steps);
    let cell = (hi - lo) / coarse_steps as f64;
    scan((u - 2.0 * cell).max(lo), (u + 2.0 * cell).min(hi), 4000)
}

/// Dense `P M P^T` for the permutation `perm` (row `i` of the result is row
/// `perm[i]` of the input).
pub fn permute_sym(m: &Array2<f64>, perm: &[usize]) -> Array2<f64> {
    Array2::from_shape_fn(m.dim(), |(i, j)| m[[perm[i], perm[j]]])
}

pub fn permute_rows(m: &Array2<f64>, perm: &[usize]) -> Array2<f64> {
    Array2::from_shape_fn(m.dim(), |(i, j)| m[[perm[i], j]])
}

/// Root of the workspace, where `configs/` and `data/` live.
pub fn workspace_root() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Dataset root used by data-dependent checks: `$RGNN_DATA_ROOT` or
/// `<workspace>/data`.
pub fn data_root() -> std::path::PathBuf {
    std::env::var_os(rgnn::data::DATA_ROOT_ENV)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| workspace_root().join("data"))
}
