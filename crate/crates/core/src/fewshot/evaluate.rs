use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classifier::{fit_classifier, ClassifierSpec};
use super::episode::{augment_support, sample_episode, EpisodeConfig};
use crate::error::{Error, Result};
use crate::featurestore::{FeatureBank, Split};
use crate::model::CcfModel;
use crate::numcore::Rng;

/// Mean accuracy with a normal-approximation 95% confidence half-width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_episodes: usize,
    pub mean_accuracy: f64,
    pub ci95_halfwidth: f64,
    pub per_episode_accuracies: Vec<f64>,
}

impl EvalReport {
    /// `1.96 · s / √n` with the n−1 sample standard deviation (0 for n = 1).
    pub fn from_accuracies(per_episode_accuracies: Vec<f64>) -> Result<Self> {
        let n = per_episode_accuracies.len();
        if n == 0 {
            return Err(Error::InvalidArgument("no episodes".into()));
        }
        let mean = per_episode_accuracies.iter().sum::<f64>() / n as f64;
        let stddev = if n > 1 {
            let ss: f64 = per_episode_accuracies
                .iter()
                .map(|a| (a - mean) * (a - mean))
                .sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            n_episodes: n,
            mean_accuracy: mean,
            ci95_halfwidth: 1.96 * stddev / (n as f64).sqrt(),
            per_episode_accuracies,
        })
    }
}

/// Accuracy of one episode whose RNG is derived from `(seed, index)`.
pub fn run_episode(
    bank: &FeatureBank,
    split: Split,
    model: Option<&CcfModel>,
    classifier: &ClassifierSpec,
    config: EpisodeConfig,
    seed: u64,
    index: u64,
) -> Result<f64> {
    let mut rng = Rng::derived(seed, index);
    let episode = sample_episode(bank, split, config, &mut rng)?;
    let support = match model {
        Some(m) => augment_support(&episode.support, m)?,
        None => episode.support,
    };
    let clf = fit_classifier(&support, classifier)?;
    let correct = episode
        .query
        .features
        .iter_rows()
        .zip(&episode.query.labels)
        .filter(|(q, &l)| clf.predict(q) == l)
        .count();
    Ok(correct as f64 / episode.query.len() as f64)
}

/// Runs `n_episodes` independent episodes, in parallel on the current rayon
/// pool. Results are independent of scheduling: episode `i` always uses the
/// RNG derived from `(seed, i)` and accuracies are aggregated in index order.
/// Without a model this is the plain baseline; with one, only the support set
/// changes, so query sets are identical for the same seed.
#[allow(clippy::too_many_arguments)]
pub fn evaluate(
    bank: &FeatureBank,
    split: Split,
    model: Option<&CcfModel>,
    classifier: &ClassifierSpec,
    config: EpisodeConfig,
    n_episodes: usize,
    seed: u64,
) -> Result<EvalReport> {
    config.check_split(bank, split)?;
    classifier.validate()?;
    if let Some(m) = model {
        if m.feature_dim() != bank.feature_dim() {
            return Err(Error::Shape(format!(
                "model expects {}-dim features, bank has {}",
                m.feature_dim(),
                bank.feature_dim()
            )));
        }
    }
    let accuracies = (0..n_episodes as u64)
        .into_par_iter()
        .map(|i| run_episode(bank, split, model, classifier, config, seed, i))
        .collect::<Result<Vec<f64>>>()?;
    EvalReport::from_accuracies(accuracies)
}
