use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featurestore::{FeatureBank, Split};
use crate::fewshot::{evaluate, ClassifierSpec, EpisodeConfig};
use crate::model::{reconstruction_error, train_with_validation, TrainConfig};

/// Everything a sweep holds fixed while temperature and seed vary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub train: TrainConfig,
    pub episodes: EpisodeConfig,
    pub classifier: ClassifierSpec,
    /// Validation episodes scored for each trained model.
    pub eval_episodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub temperature: f64,
    pub seed: u64,
    /// Mean squared reconstruction error on the base split.
    pub reconstruction_error: f64,
    pub val_accuracy: f64,
    pub epochs_trained: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub temperatures: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Temperature-major, in input order.
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Rows of one seed, ordered like `temperatures`.
    pub fn rows_for_seed(&self, seed: u64) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.seed == seed).collect()
    }

    /// Spearman correlation of temperature with reconstruction error for each
    /// seed; `None` where either ranking is constant.
    pub fn error_correlations(&self) -> Vec<Option<f64>> {
        self.seeds
            .iter()
            .map(|&s| {
                let rows = self.rows_for_seed(s);
                let t: Vec<f64> = rows.iter().map(|r| r.temperature).collect();
                let e: Vec<f64> = rows.iter().map(|r| r.reconstruction_error).collect();
                spearman(&t, &e)
            })
            .collect()
    }
}

/// Trains one model per `(temperature, seed)` cell, all else fixed.
///
/// Cells run in parallel on the current rayon pool; the report does not depend
/// on scheduling.
pub fn temperature_sweep(
    bank: &FeatureBank,
    settings: &SweepSettings,
    temperatures: &[f64],
    seeds: &[u64],
) -> Result<SweepReport> {
    if temperatures.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidArgument(
            "a sweep needs at least one temperature and one seed".into(),
        ));
    }
    settings.episodes.check_split(bank, Split::Validation)?;
    let cells: Vec<(f64, u64)> = temperatures
        .iter()
        .flat_map(|&t| seeds.iter().map(move |&s| (t, s)))
        .collect();
    let base = bank.features().select_rows(&bank.samples_in(Split::Base));
    let rows = cells
        .into_par_iter()
        .map(|(temperature, seed)| {
            let config = TrainConfig {
                temperature,
                seed,
                ..settings.train.clone()
            };
            let annotate = |e: Error| match e {
                Error::Training { epoch, reason } => Error::Training {
                    epoch,
                    reason: format!("T={temperature}, seed={seed}: {reason}"),
                },
                other => other,
            };
            let trained =
                train_with_validation(bank, &config, settings.episodes, &settings.classifier)
                    .map_err(annotate)?;
            let reconstruction_error = reconstruction_error(&trained.model, &base)?;
            let val = evaluate(
                bank,
                Split::Validation,
                Some(&trained.model),
                &settings.classifier,
                settings.episodes,
                settings.eval_episodes,
                config.validation_seed(),
            )?;
            Ok(SweepRow {
                temperature,
                seed,
                reconstruction_error,
                val_accuracy: val.mean_accuracy,
                epochs_trained: trained.log.epochs.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        temperatures: temperatures.to_vec(),
        seeds: seeds.to_vec(),
        rows,
    })
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with ties given their average rank.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / (sxx * syy).sqrt())
    }
}
