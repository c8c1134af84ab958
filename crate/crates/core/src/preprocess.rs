//! Box-Cox power transform.
//!
//! A single scalar λ is used for every feature dimension. It is chosen on the
//! pooled base-split values and then applied unchanged to every split.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featurestore::{FeatureBank, Split};

/// Offset kept between the smallest shifted value and zero.
pub const SHIFT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxCoxParams {
    pub lambda: f64,
    /// Added to every input before transforming.
    pub shift: f64,
}

impl BoxCoxParams {
    pub fn new(lambda: f64, shift: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        if !(shift >= 0.0 && shift.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "shift must be non-negative and finite, got {shift}"
            )));
        }
        Ok(Self { lambda, shift })
    }

    /// Smallest shift that keeps every value in `values` at least ε above zero.
    pub fn shift_for<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
        let min = values.into_iter().copied().fold(f64::INFINITY, f64::min);
        (SHIFT_EPSILON - min).max(0.0)
    }
}

/// Scalar transform of an already shifted, strictly positive value.
#[inline]
pub fn boxcox_scalar(v: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        v.ln()
    } else if lambda == 1.0 {
        v - 1.0
    } else {
        // expm1 keeps full relative precision when λ·ln v is small
        (lambda * v.ln()).exp_m1() / lambda
    }
}

/// Entrywise `((x + shift)^λ − 1) / λ`, or `ln(x + shift)` at λ = 0.
pub fn boxcox(x: &[f64], params: &BoxCoxParams) -> Result<Vec<f64>> {
    x.iter()
        .enumerate()
        .map(|(index, &xi)| {
            let v = xi + params.shift;
            if v > 0.0 {
                Ok(boxcox_scalar(v, params.lambda))
            } else {
                Err(Error::Domain { index, value: v })
            }
        })
        .collect()
}

/// Applies the transform to every feature of the bank.
pub fn boxcox_bank(bank: &FeatureBank, params: &BoxCoxParams) -> Result<FeatureBank> {
    bank.map_features(|row| boxcox(row, params))
}

/// Profile log-likelihood of λ for a positive sample under a normal model of
/// the transformed values, with the variance at its maximum-likelihood value.
pub fn boxcox_log_likelihood(values: &[f64], lambda: f64) -> f64 {
    let n = values.len() as f64;
    let mut sum_log = 0.0;
    let mut sum = 0.0;
    let transformed: Vec<f64> = values
        .iter()
        .map(|&v| {
            sum_log += v.ln();
            let t = boxcox_scalar(v, lambda);
            sum += t;
            t
        })
        .collect();
    let mean = sum / n;
    let var = transformed
        .iter()
        .map(|t| (t - mean) * (t - mean))
        .sum::<f64>()
        / n;
    if var <= 0.0 {
        return f64::NEG_INFINITY;
    }
    -0.5 * n * var.ln() + (lambda - 1.0) * sum_log
}

/// Picks the grid λ with the highest pooled base-split likelihood. Exact ties
/// go to the smallest |λ| (then the smaller λ).
pub fn fit_lambda(bank: &FeatureBank, candidate_grid: &[f64]) -> Result<BoxCoxParams> {
    if candidate_grid.is_empty() {
        return Err(Error::InvalidArgument("lambda grid is empty".into()));
    }
    if let Some(l) = candidate_grid.iter().find(|l| !l.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda grid contains {l}")));
    }
    let samples = bank.samples_in(Split::Base);
    if samples.is_empty() {
        return Err(Error::InvalidArgument("base split is empty".into()));
    }
    let pooled: Vec<f64> = samples
        .iter()
        .flat_map(|&i| bank.feature(i).iter().copied())
        .collect();
    let shift = BoxCoxParams::shift_for(&pooled);
    let shifted: Vec<f64> = pooled.iter().map(|x| x + shift).collect();
    let lambda = select_lambda(&shifted, candidate_grid);
    BoxCoxParams::new(lambda, shift)
}

fn select_lambda(values: &[f64], grid: &[f64]) -> f64 {
    let mut best = (f64::NEG_INFINITY, grid[0]);
    let mut first = true;
    for &lambda in grid {
        let ll = boxcox_log_likelihood(values, lambda);
        let better = first
            || ll > best.0
            || (ll == best.0
                && (lambda.abs() < best.1.abs()
                    || (lambda.abs() == best.1.abs() && lambda < best.1)));
        if better {
            best = (ll, lambda);
            first = false;
        }
    }
    best.1
}
