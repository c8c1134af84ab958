//! Turning a raw bank into the space the corrector works in.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featurestore::{FeatureBank, Split};
use crate::preprocess::{boxcox_bank, fit_lambda, BoxCoxParams};

/// How to transform raw features before training and evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxCoxConfig {
    pub enabled: bool,
    /// Used as is unless `fit` is set.
    pub lambda: f64,
    /// Choose λ from `grid` by likelihood on the base split.
    pub fit: bool,
    pub grid: Vec<f64>,
    /// Fixed shift; `None` derives it from the data.
    pub shift: Option<f64>,
}

impl Default for BoxCoxConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            lambda: 0.5,
            fit: false,
            grid: (-8..=8).map(|k| f64::from(k) * 0.25).collect(),
            shift: None,
        }
    }
}

/// Resolves the transform for `bank`.
///
/// λ comes from the base split only. The derived shift covers the minimum
/// over every split so that validation and novel features stay inside the
/// transform's domain; it uses no labels.
pub fn resolve_boxcox(bank: &FeatureBank, config: &BoxCoxConfig) -> Result<Option<BoxCoxParams>> {
    if !config.enabled {
        return Ok(None);
    }
    if bank.samples_in(Split::Base).is_empty() {
        return Err(Error::InvalidArgument("bank has no base split".into()));
    }
    let lambda = if config.fit {
        fit_lambda(bank, &config.grid)?.lambda
    } else {
        config.lambda
    };
    let shift = match config.shift {
        Some(s) => s,
        None => BoxCoxParams::shift_for(bank.features().data()),
    };
    BoxCoxParams::new(lambda, shift).map(Some)
}

pub fn apply(bank: &FeatureBank, params: Option<&BoxCoxParams>) -> Result<FeatureBank> {
    match params {
        Some(p) => boxcox_bank(bank, p),
        None => Ok(bank.clone()),
    }
}

/// [`resolve_boxcox`] followed by [`apply`].
pub fn prepare(
    bank: &FeatureBank,
    config: &BoxCoxConfig,
) -> Result<(Option<BoxCoxParams>, FeatureBank)> {
    let params = resolve_boxcox(bank, config)?;
    let transformed = apply(bank, params.as_ref())?;
    Ok((params, transformed))
}
