use serde::{Deserialize, Serialize};

use super::network::CcfModel;
use crate::error::{Error, Result};
use crate::numcore::{matmul_nt, matmul_tn, Matrix};

/// Loss hyperparameters. `ce_weight = 0` gives the reconstruction-only control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub temperature: f64,
    pub beta: f64,
    pub ce_weight: f64,
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "temperature must be positive, got {}",
                self.temperature
            )));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "beta must be non-negative, got {}",
                self.beta
            )));
        }
        if !(self.ce_weight >= 0.0 && self.ce_weight.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ce_weight must be non-negative, got {}",
                self.ce_weight
            )));
        }
        Ok(())
    }
}

/// Features with base-class targets given as latent indices `0..n_base`.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub features: Matrix,
    pub targets: Vec<usize>,
}

impl Batch {
    pub fn new(features: Matrix, targets: Vec<usize>) -> Result<Self> {
        if features.rows() != targets.len() {
            return Err(Error::Shape(format!(
                "{} feature rows and {} targets",
                features.rows(),
                targets.len()
            )));
        }
        if targets.is_empty() {
            return Err(Error::InvalidArgument("empty batch".into()));
        }
        Ok(Self { features, targets })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Batch-mean loss terms. `total = mse + ce_weight·ce + β·frob`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub mse: f64,
    pub ce: f64,
    pub frob: f64,
    pub total: f64,
}

/// Per-parameter gradients, shaped like the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Matrix,
    pub b1: Vec<f64>,
    pub w2: Matrix,
    pub b2: Vec<f64>,
    pub w3: Matrix,
    pub b3: Vec<f64>,
}

impl Gradients {
    /// Buffers in the same order as [`CcfModel::buffers`].
    pub fn buffers(&self) -> [&[f64]; 6] {
        [
            self.w1.data(),
            &self.b1,
            self.w2.data(),
            &self.b2,
            self.w3.data(),
            &self.b3,
        ]
    }
}

fn check_targets(model: &CcfModel, batch: &Batch) -> Result<()> {
    if let Some((i, &t)) = batch
        .targets
        .iter()
        .enumerate()
        .find(|(_, &t)| t >= model.latent_dim())
    {
        return Err(Error::InvalidArgument(format!(
            "target {t} of sample {i} is not a base class (model has {})",
            model.latent_dim()
        )));
    }
    Ok(())
}

/// Log-softmax of `z / T` at index `target` and the softmax itself.
fn tempered_log_prob(z: &[f64], temperature: f64, target: usize) -> (f64, Vec<f64>) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max) / temperature;
    let exps: Vec<f64> = z.iter().map(|&v| (v / temperature - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    let log_prob = z[target] / temperature - max - sum.ln();
    (log_prob, exps.into_iter().map(|e| e / sum).collect())
}

pub fn loss(model: &CcfModel, batch: &Batch, weights: &LossWeights) -> Result<LossBreakdown> {
    weights.validate()?;
    check_targets(model, batch)?;
    let cache = model.forward(&batch.features)?;
    Ok(breakdown(&cache.latent, &cache.output, batch, weights))
}

fn breakdown(latent: &Matrix, output: &Matrix, batch: &Batch, w: &LossWeights) -> LossBreakdown {
    let n = batch.len() as f64;
    let (mut mse, mut ce, mut frob) = (0.0, 0.0, 0.0);
    for (i, &t) in batch.targets.iter().enumerate() {
        let x = batch.features.row(i);
        mse += x
            .iter()
            .zip(output.row(i))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
        let z = latent.row(i);
        ce -= tempered_log_prob(z, w.temperature, t).0;
        frob += z.iter().map(|v| v * v).sum::<f64>();
    }
    let (mse, ce, frob) = (mse / n, ce / n, frob / n);
    LossBreakdown {
        mse,
        ce,
        frob,
        total: mse + w.ce_weight * ce + w.beta * frob,
    }
}

/// Loss and exact gradients of `total` with respect to every parameter.
pub fn gradients(
    model: &CcfModel,
    batch: &Batch,
    weights: &LossWeights,
) -> Result<(LossBreakdown, Gradients)> {
    weights.validate()?;
    check_targets(model, batch)?;
    let arch = *model.architecture();
    let cache = model.forward(&batch.features)?;
    let report = breakdown(&cache.latent, &cache.output, batch, weights);
    let n = batch.len() as f64;
    let t = weights.temperature;

    // d total / d output_pre
    let mut d_out = cache.output.clone();
    for i in 0..batch.len() {
        let x = batch.features.row(i);
        let pre = cache.output_pre.row(i).to_vec();
        for ((g, &xi), p) in d_out.row_mut(i).iter_mut().zip(x).zip(pre) {
            *g = 2.0 / n * (*g - xi) * model.act_grad(arch.decoder_activation, p);
        }
    }
    let w3 = matmul_tn(&cache.latent, &d_out)?;
    let b3 = d_out.col_sums();

    // d total / d z: decoder path + tempered CE + norm penalty
    let mut d_z = matmul_nt(&d_out, &model.w3)?;
    for (i, &target) in batch.targets.iter().enumerate() {
        let z = cache.latent.row(i).to_vec();
        let (_, probs) = tempered_log_prob(&z, t, target);
        for (j, g) in d_z.row_mut(i).iter_mut().enumerate() {
            let onehot = if j == target { 1.0 } else { 0.0 };
            *g += weights.ce_weight * (probs[j] - onehot) / (t * n) + weights.beta * 2.0 * z[j] / n;
        }
    }
    let w2 = matmul_tn(&cache.hidden, &d_z)?;
    let b2 = d_z.col_sums();

    let mut d_hidden = matmul_nt(&d_z, &model.w2)?;
    for (g, &p) in d_hidden.data_mut().iter_mut().zip(cache.hidden_pre.data()) {
        *g *= model.act_grad(arch.encoder_activation, p);
    }
    let w1 = matmul_tn(&batch.features, &d_hidden)?;
    let b1 = d_hidden.col_sums();

    Ok((
        report,
        Gradients {
            w1,
            b1,
            w2,
            b2,
            w3,
            b3,
        },
    ))
}

/// Mean squared reconstruction error `‖x − g(f(x))‖²` over the rows of `x`.
pub fn reconstruction_error(model: &CcfModel, x: &Matrix) -> Result<f64> {
    if x.rows() == 0 {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let out = model.rectify_batch(x)?;
    let total: f64 = x
        .iter_rows()
        .zip(out.iter_rows())
        .map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>())
        .sum();
    Ok(total / x.rows() as f64)
}
