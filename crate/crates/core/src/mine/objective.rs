//! The regularized Donsker-Varadhan objective and its exact gradient.
//!
//! For statistic values `T_j` on joint pairs and `T_m` on product-of-marginal
//! pairs, each batch of size `B`:
//!
//! ```text
//! lme       = ln( (1/B) Σ exp(T_m) )
//! mi        = mean(T_j) - lme
//! objective = mi - reg · lme²
//! ```
//!
//! The objective is maximized. `∂obj/∂T_j = 1/B` and
//! `∂obj/∂T_m = -(1 + 2·reg·lme) · softmax(T_m)`.
//!
//! When the marginal batch is the joint batch with y permuted, the permuted
//! estimator credits the diagonal pairs `(x_i, y_i)` with their exact weight
//! `1/B` in the `B²` product sample and spreads the remaining `(B-1)/B` over
//! the rows the permutation moved. The expectation is that of a uniform
//! permutation, and the estimate can never exceed `ln B`.

use ndarray::{concatenate, s, Array1, Array2, ArrayView1, Axis};
use rand::seq::SliceRandom;
use rand::Rng;

use super::mlp::{relu, MlpParams};
use crate::error::{Error, Result};

/// Paired rows already scaled to reals: row `i` of `x` goes with row `i` of `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairBatch {
    pub x: Array2<f64>,
    pub y: Array2<f64>,
}

impl PairBatch {
    pub fn new(x: Array2<f64>, y: Array2<f64>) -> Result<Self> {
        if x.nrows() != y.nrows() {
            return Err(Error::Dimension(format!(
                "{} x rows vs {} y rows",
                x.nrows(),
                y.nrows()
            )));
        }
        Ok(PairBatch { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Network inputs `[x ‖ y]`.
    pub fn inputs(&self) -> Array2<f64> {
        concatenate![Axis(1), self.x, self.y]
    }

    /// Same x rows with y rows reordered: row `i` pairs `x[i]` with `y[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> PairBatch {
        PairBatch {
            x: self.x.clone(),
            y: self.y.select(Axis(0), perm),
        }
    }
}

/// Value of the objective on one joint/marginal batch pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DvValue {
    /// Unregularized DV estimate, in nats.
    pub mi_nats: f64,
    /// `ln mean exp(T)` over the marginal batch.
    pub log_mean_exp: f64,
    /// `mi_nats - reg · log_mean_exp²`, the quantity training ascends.
    pub objective: f64,
}

impl DvValue {
    fn new(mean_joint: f64, lme: f64, reg_coeff: f64) -> Self {
        let mi_nats = mean_joint - lme;
        DvValue {
            mi_nats,
            log_mean_exp: lme,
            objective: mi_nats - reg_coeff * lme * lme,
        }
    }

    /// The penalty subtracted from the estimate.
    pub fn reg_term(&self, reg_coeff: f64) -> f64 {
        reg_coeff * self.log_mean_exp * self.log_mean_exp
    }
}

/// `ln((1/n) Σ exp(v_i))`, shifted by the maximum.
pub fn logmeanexp(v: ArrayView1<f64>) -> f64 {
    let max = v.fold(f64::NEG_INFINITY, |m, &a| m.max(a));
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = v.iter().map(|&a| (a - max).exp()).sum();
    max + (sum / v.len() as f64).ln()
}

fn check_finite(t: &Array1<f64>, what: &str) -> Result<()> {
    if t.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite {
            epoch: 0,
            batch: 0,
            what: what.to_string(),
        })
    }
}

fn check_batches(joint: &PairBatch, marginal: &PairBatch) -> Result<()> {
    if joint.is_empty() || marginal.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

fn value_from_outputs(t_joint: ArrayView1<f64>, t_marg: ArrayView1<f64>, reg_coeff: f64) -> DvValue {
    DvValue::new(t_joint.mean().unwrap(), logmeanexp(t_marg), reg_coeff)
}

/// `ln Σ w_i exp(v_i)` over entries with positive weight.
fn weighted_lse(v: ArrayView1<f64>, w: &[f64]) -> f64 {
    let max = v
        .iter()
        .zip(w)
        .filter(|(_, &w)| w > 0.0)
        .fold(f64::NEG_INFINITY, |m, (&a, _)| m.max(a));
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = v.iter().zip(w).map(|(&a, &w)| if w > 0.0 { w * (a - max).exp() } else { 0.0 }).sum();
    max + sum.ln()
}

/// Marginal weights over stacked `[joint; permuted]` rows.
fn permuted_weights(perm: &[usize]) -> Vec<f64> {
    let b = perm.len() as f64;
    let moved = perm.iter().enumerate().filter(|&(i, &p)| i != p).count();
    let mut w = vec![0.0; 2 * perm.len()];
    if moved == 0 {
        w[..perm.len()].fill(1.0 / b);
        return w;
    }
    w[..perm.len()].fill(1.0 / (b * b));
    let share = (b - 1.0) / (b * moved as f64);
    for (i, &p) in perm.iter().enumerate() {
        if i != p {
            w[perm.len() + i] = share;
        }
    }
    w
}

fn check_perm(joint: &PairBatch, perm: &[usize]) -> Result<()> {
    let b = joint.len();
    if b == 0 || perm.len() != b {
        return Err(Error::Dimension(format!("{} rows, permutation of {}", b, perm.len())));
    }
    let mut seen = vec![false; b];
    for &p in perm {
        if p >= b || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParam("not a permutation".into()));
        }
    }
    Ok(())
}

/// Objective with the marginal batch given as a permutation of the joint
/// batch's y rows, using the diagonal-credited estimator.
pub fn dv_objective_permuted(
    params: &MlpParams,
    joint: &PairBatch,
    perm: &[usize],
    reg_coeff: f64,
) -> Result<DvValue> {
    check_perm(joint, perm)?;
    let tj = params.forward_batch(joint.inputs().view())?;
    let tm = params.forward_batch(joint.permuted(perm).inputs().view())?;
    check_finite(&tj, "statistic on joint batch")?;
    check_finite(&tm, "statistic on marginal batch")?;
    let t = concatenate![Axis(0), tj, tm];
    let lme = weighted_lse(t.view(), &permuted_weights(perm));
    Ok(DvValue::new(tj.mean().unwrap(), lme, reg_coeff))
}

/// Objective value for explicit joint and marginal batches.
pub fn dv_objective(
    params: &MlpParams,
    joint: &PairBatch,
    marginal: &PairBatch,
    reg_coeff: f64,
) -> Result<DvValue> {
    check_batches(joint, marginal)?;
    let tj = params.forward_batch(joint.inputs().view())?;
    let tm = params.forward_batch(marginal.inputs().view())?;
    check_finite(&tj, "statistic on joint batch")?;
    check_finite(&tm, "statistic on marginal batch")?;
    Ok(value_from_outputs(tj.view(), tm.view(), reg_coeff))
}

/// Objective value and its gradient with respect to every parameter.
pub fn backward(
    params: &MlpParams,
    joint: &PairBatch,
    marginal: &PairBatch,
    reg_coeff: f64,
) -> Result<(DvValue, MlpParams)> {
    check_batches(joint, marginal)?;
    let inputs = concatenate![Axis(0), joint.inputs(), marginal.inputs()];
    if inputs.ncols() != params.input_dim() {
        return Err(Error::Dimension(format!(
            "network takes {} inputs, got {}",
            params.input_dim(),
            inputs.ncols()
        )));
    }
    let z1 = params.layers[0].apply(inputs.view());
    let mut weights = vec![0.0; joint.len()];
    weights.extend(std::iter::repeat_n(1.0 / marginal.len() as f64, marginal.len()));
    let (value, dz1, mut grads) = head_backward(params, z1, joint.len(), &weights, reg_coeff)?;
    grads.layers[0].w = inputs.t().dot(&dz1);
    grads.layers[0].b = dz1.sum_axis(Axis(0));
    Ok((value, grads))
}

/// Gradient of [`dv_objective_permuted`]. The x half of the first layer is evaluated once for both batches.
pub(crate) fn backward_permuted(
    params: &MlpParams,
    joint: &PairBatch,
    perm: &[usize],
    reg_coeff: f64,
) -> Result<(DvValue, MlpParams)> {
    check_perm(joint, perm)?;
    let b = joint.len();
    let dx = joint.x.ncols();
    let first = &params.layers[0];
    if dx + joint.y.ncols() != first.fan_in() {
        return Err(Error::Dimension(format!(
            "network takes {} inputs, got {}",
            first.fan_in(),
            dx + joint.y.ncols()
        )));
    }
    let wx = first.w.slice(s![..dx, ..]);
    let wy = first.w.slice(s![dx.., ..]);
    let xw = joint.x.dot(&wx);
    let yw = joint.y.dot(&wy);
    let mut z1 = Array2::zeros((2 * b, first.fan_out()));
    {
        let (mut zj, mut zm) = z1.view_mut().split_at(Axis(0), b);
        zj.assign(&xw);
        zj += &yw;
        zm.assign(&xw);
        for (mut row, &p) in zm.rows_mut().into_iter().zip(perm) {
            row += &yw.row(p);
        }
    }
    z1 += &first.b;
    let (value, dz1, mut grads) = head_backward(params, z1, b, &permuted_weights(perm), reg_coeff)?;
    let dzj = dz1.slice(s![..b, ..]);
    let dzm = dz1.slice(s![b.., ..]);
    let for_x = &dzj + &dzm;
    let mut for_y = dzj.to_owned();
    for (row, &p) in dzm.rows().into_iter().zip(perm) {
        let mut dst = for_y.row_mut(p);
        dst += &row;
    }
    let mut gw = Array2::zeros(first.w.raw_dim());
    gw.slice_mut(s![..dx, ..]).assign(&joint.x.t().dot(&for_x));
    gw.slice_mut(s![dx.., ..]).assign(&joint.y.t().dot(&for_y));
    grads.layers[0].w = gw;
    grads.layers[0].b = dz1.sum_axis(Axis(0));
    Ok((value, grads))
}

/// Runs every layer after the first on stacked `[joint; marginal]`
/// pre-activations and backpropagates to them. `weights` gives each stacked
/// row's share of the product-of-marginals mean. Returns the objective, its
/// gradient with respect to `z1`, and gradients for layers 1.. (layer 0 is
/// left zeroed for the caller).
fn head_backward(
    params: &MlpParams,
    z1: Array2<f64>,
    b_joint: usize,
    weights: &[f64],
    reg_coeff: f64,
) -> Result<(DvValue, Array2<f64>, MlpParams)> {
    let n_layers = params.layers.len();
    // activations[k] is the input of layer k + 1
    let mut activations: Vec<Array2<f64>> = Vec::with_capacity(n_layers - 1);
    let mut z = z1;
    for layer in &params.layers[1..] {
        let h = z.mapv(relu);
        z = layer.apply(h.view());
        activations.push(h);
    }
    let t = z.index_axis_move(Axis(1), 0);
    let tj = t.slice(s![..b_joint]);
    if !t.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite {
            epoch: 0,
            batch: 0,
            what: "statistic network output".into(),
        });
    }
    let lme = weighted_lse(t.view(), weights);
    let value = DvValue::new(tj.mean().unwrap(), lme, reg_coeff);

    let coeff = -(1.0 + 2.0 * reg_coeff * lme);
    let mut dt: Array1<f64> = t
        .iter()
        .zip(weights)
        .map(|(&v, &w)| if w > 0.0 { coeff * w * (v - lme).exp() } else { 0.0 })
        .collect();
    dt.slice_mut(s![..b_joint]).mapv_inplace(|d| d + 1.0 / b_joint as f64);

    let mut grads = params.zeros_like();
    let mut dz = dt.insert_axis(Axis(1));
    for k in (1..n_layers).rev() {
        let h = &activations[k - 1];
        grads.layers[k].w = h.t().dot(&dz);
        grads.layers[k].b = dz.sum_axis(Axis(0));
        let mut dh = dz.dot(&params.layers[k].w.t());
        ndarray::Zip::from(&mut dh).and(h).for_each(|d, &a| {
            if a <= 0.0 {
                *d = 0.0;
            }
        });
        dz = dh;
    }
    Ok((value, dz, grads))
}

/// Uniform random permutation of `0..n`; needs at least two rows.
pub fn marginal_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<usize>> {
    if n < 2 {
        return Err(Error::InvalidParam(format!(
            "marginal shuffling needs at least 2 rows, got {n}"
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Ok(perm)
}

/// Keeps x rows in place and shuffles y rows, approximating samples from the
/// product of marginals.
pub fn shuffle_marginals<R: Rng + ?Sized>(batch: &PairBatch, rng: &mut R) -> Result<PairBatch> {
    let perm = marginal_permutation(batch.len(), rng)?;
    Ok(batch.permuted(&perm))
}
