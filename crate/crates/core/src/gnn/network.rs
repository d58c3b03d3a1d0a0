//! Forward and reverse passes of the filter-bank GNN
//!
//! ```text
//! X_l = sigma_l( sum_{r<R} S^r X_{l-1} Theta_{l,r} )
//! ```
//!
//! Each layer is evaluated in Horner form: with `Y_r = X_{l-1} Theta_{l,r}`,
//!
//! ```text
//! U_{R-1} = Y_{R-1},   U_k = Y_k + S U_{k+1},   Z_l = U_0
//! ```
//!
//! so `S` only ever multiplies `N x F_l` matrices and no power of `S` is
//! formed. The reverse pass uses `W_k = (S^T)^k G` for the upstream
//! gradient `G` of `Z_l`:
//!
//! ```text
//! dL/dTheta_{l,r} = X_{l-1}^T W_r
//! dL/dS          += sum_{k<R-1} W_k U_{k+1}^T
//! dL/dX_{l-1}     = sum_r W_r Theta_{l,r}^T
//! ```
//!
//! The gradient with respect to `S` treats every entry as free; it is not
//! symmetrized.

use ndarray::{Array2, ArrayView2, Zip};

use super::{cross_entropy_with_grad, GnnParams, LabeledTargets, ModelError};

/// Intermediates of one layer, kept for the reverse pass.
#[derive(Debug, Clone)]
pub struct LayerCache {
    /// `X_{l-1}`.
    pub input: Array2<f64>,
    /// Horner partial sums `U_1 .. U_{R-1}`; `U_k = sum_{r>=k} S^{r-k} X_{l-1} Theta_{l,r}`.
    pub partial_sums: Vec<Array2<f64>>,
    /// `Z_l`.
    pub preactivation: Array2<f64>,
}

#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub layers: Vec<LayerCache>,
    /// `X_L`, equal to the returned logits.
    pub output: Array2<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub theta: GnnParams,
    /// Raw `N x N` gradient over every entry of `S`.
    pub gso: Array2<f64>,
}

pub fn forward(
    x: ArrayView2<'_, f64>,
    s: ArrayView2<'_, f64>,
    params: &GnnParams,
) -> Result<(Array2<f64>, ForwardCache), ModelError> {
    forward_projected(x, s, params, None)
}

/// `forward` with the first layer's `X Theta_{1,r}` products supplied by the
/// caller, for loops that hold `Theta` fixed while `S` moves.
pub(crate) fn forward_projected(
    x: ArrayView2<'_, f64>,
    s: ArrayView2<'_, f64>,
    params: &GnnParams,
    first_layer: Option<&[Array2<f64>]>,
) -> Result<(Array2<f64>, ForwardCache), ModelError> {
    check_shapes(x, s, params)?;
    let depth = params.num_layers();
    let mut layers = Vec::with_capacity(depth);
    let mut current = x.to_owned();
    for l in 0..depth {
        let taps = params.layer(l);
        let projected: Vec<Array2<f64>> = match (l, first_layer) {
            (0, Some(p)) => p.to_vec(),
            _ => taps.iter().map(|theta| current.dot(theta)).collect(),
        };
        let mut partial_sums = Vec::with_capacity(taps.len() - 1);
        let mut acc = projected[taps.len() - 1].clone();
        for r in (0..taps.len() - 1).rev() {
            partial_sums.push(acc.clone());
            acc = shift(s, &acc);
            acc += &projected[r];
        }
        partial_sums.reverse();
        let z = acc;
        if z.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFinite { layer: l + 1 });
        }
        let out = if l + 1 < depth { z.mapv(relu) } else { z.clone() };
        layers.push(LayerCache {
            input: current,
            partial_sums,
            preactivation: z,
        });
        current = out;
    }
    let cache = ForwardCache {
        layers,
        output: current.clone(),
    };
    Ok((current, cache))
}

/// Exact gradients of `masked_cross_entropy(forward(x, s, params))` with
/// respect to every coefficient and every entry of `s`.
pub fn backward(
    cache: &ForwardCache,
    params: &GnnParams,
    s: ArrayView2<'_, f64>,
    targets: &LabeledTargets,
    mask: &[bool],
) -> Result<Gradients, ModelError> {
    let (_, dlogits) = cross_entropy_with_grad(cache.output.view(), targets, mask)?;
    let (theta, gso) = backward_from(cache, params, s, dlogits, Wanted::Both)?;
    Ok(Gradients {
        theta: theta.expect("requested"),
        gso: gso.expect("requested"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Wanted {
    Theta,
    Gso,
    Both,
}

impl Wanted {
    fn theta(self) -> bool {
        matches!(self, Wanted::Theta | Wanted::Both)
    }
    fn gso(self) -> bool {
        matches!(self, Wanted::Gso | Wanted::Both)
    }
}

pub(crate) fn backward_from(
    cache: &ForwardCache,
    params: &GnnParams,
    s: ArrayView2<'_, f64>,
    dlogits: Array2<f64>,
    wanted: Wanted,
) -> Result<(Option<GnnParams>, Option<Array2<f64>>), ModelError> {
    let depth = params.num_layers();
    if cache.layers.len() != depth {
        return Err(ModelError::CacheMismatch(format!(
            "cache has {} layers, parameters {depth}",
            cache.layers.len()
        )));
    }
    let n = s.nrows();
    if cache.output.dim() != dlogits.dim() || cache.output.nrows() != n {
        return Err(ModelError::CacheMismatch(
            "output shape differs from gradient or gso".into(),
        ));
    }
    for (l, lc) in cache.layers.iter().enumerate() {
        if lc.input.ncols() != params.dims()[l]
            || lc.preactivation.ncols() != params.dims()[l + 1]
            || lc.partial_sums.len() + 1 != params.order()
        {
            return Err(ModelError::CacheMismatch(format!("layer {} shapes differ", l + 1)));
        }
    }

    let mut grad_theta = wanted.theta().then(|| params.zeros_like());
    let mut grad_gso = wanted.gso().then(|| Array2::<f64>::zeros((n, n)));
    let st = s.t();
    let mut upstream = dlogits;
    for l in (0..depth).rev() {
        let lc = &cache.layers[l];
        if l + 1 < depth {
            Zip::from(&mut upstream).and(&lc.preactivation).for_each(|g, &z| {
                if z <= 0.0 {
                    *g = 0.0
                }
            });
        }
        let order = params.order();
        let mut w = Vec::with_capacity(order);
        w.push(upstream);
        for k in 1..order {
            let next = shift(st, &w[k - 1]);
            w.push(next);
        }
        if let Some(gs) = grad_gso.as_mut() {
            for (wk, u) in w.iter().zip(&lc.partial_sums) {
                gs.scaled_add(1.0, &wk.dot(&u.t()));
            }
        }
        if let Some(gt) = grad_theta.as_mut() {
            for (r, g) in gt.layer_mut(l).iter_mut().enumerate() {
                *g = lc.input.t().dot(&w[r]);
            }
        }
        if l > 0 {
            let taps = params.layer(l);
            let mut below = w[0].dot(&taps[0].t());
            for r in 1..order {
                below.scaled_add(1.0, &w[r].dot(&taps[r].t()));
            }
            upstream = below;
        } else {
            break;
        }
    }
    Ok((grad_theta, grad_gso))
}

fn relu(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

#[cfg(test)]
thread_local! {
    /// Column widths of every right operand multiplied by the shift operator.
    pub(crate) static SHIFT_WIDTHS: std::cell::RefCell<Vec<usize>> = const { std::cell::RefCell::new(Vec::new()) };
}

fn shift(s: ArrayView2<'_, f64>, m: &Array2<f64>) -> Array2<f64> {
    #[cfg(test)]
    SHIFT_WIDTHS.with(|w| w.borrow_mut().push(m.ncols()));
    s.dot(m)
}

fn check_shapes(x: ArrayView2<'_, f64>, s: ArrayView2<'_, f64>, params: &GnnParams) -> Result<(), ModelError> {
    let (n, f) = x.dim();
    if s.dim() != (n, n) {
        return Err(ModelError::Shape(format!(
            "gso is {:?} but features have {n} rows",
            s.dim()
        )));
    }
    if f != params.dims()[0] {
        return Err(ModelError::Shape(format!(
            "features have {f} columns, network expects {}",
            params.dims()[0]
        )));
    }
    Ok(())
}
