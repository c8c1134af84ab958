use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featurestore::{FeatureBank, Split};
use crate::model::CcfModel;
use crate::numcore::{Matrix, Rng};

/// Shape of an episode: N classes, K support and Q query samples per class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpisodeConfig {
    pub way: usize,
    pub shot: usize,
    pub query: usize,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        Self {
            way: 5,
            shot: 1,
            query: 15,
        }
    }
}

impl EpisodeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.way == 0 || self.shot == 0 || self.query == 0 {
            return Err(Error::InvalidArgument(format!(
                "way, shot and query must be positive (got {}, {}, {})",
                self.way, self.shot, self.query
            )));
        }
        Ok(())
    }

    /// Checks that `split` can supply episodes of this shape.
    pub fn check_split(&self, bank: &FeatureBank, split: Split) -> Result<()> {
        self.validate()?;
        let classes = bank.classes_in(split);
        if classes.len() < self.way {
            return Err(Error::InvalidArgument(format!(
                "split {split} has {} classes, a {}-way episode needs at least that many",
                classes.len(),
                self.way
            )));
        }
        let need = self.shot + self.query;
        if let Some(&c) = classes.iter().find(|&&c| bank.samples_of(c).len() < need) {
            return Err(Error::InvalidArgument(format!(
                "class {c} in split {split} has {} samples, episodes need {need} (K + Q)",
                bank.samples_of(c).len()
            )));
        }
        Ok(())
    }
}

/// Features with episode-local labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet {
    pub features: Matrix,
    pub labels: Vec<usize>,
}

impl LabeledSet {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub config: EpisodeConfig,
    /// Bank class ids; position = episode-local label.
    pub class_ids: Vec<usize>,
    pub support: LabeledSet,
    pub query: LabeledSet,
    /// Bank sample indices behind `support` and `query`, row for row.
    pub support_indices: Vec<usize>,
    pub query_indices: Vec<usize>,
}

/// Draws N classes, then K + Q samples per class, all without replacement.
/// The first K draws of each class form its support.
pub fn sample_episode(
    bank: &FeatureBank,
    split: Split,
    config: EpisodeConfig,
    rng: &mut Rng,
) -> Result<Episode> {
    config.check_split(bank, split)?;
    let classes = bank.classes_in(split);
    let class_ids: Vec<usize> = rng
        .sample_indices(classes.len(), config.way)
        .into_iter()
        .map(|i| classes[i])
        .collect();

    let mut support_indices = Vec::with_capacity(config.way * config.shot);
    let mut query_indices = Vec::with_capacity(config.way * config.query);
    let mut support_labels = Vec::with_capacity(config.way * config.shot);
    let mut query_labels = Vec::with_capacity(config.way * config.query);
    for (label, &c) in class_ids.iter().enumerate() {
        let pool = bank.samples_of(c);
        let picks = rng.sample_indices(pool.len(), config.shot + config.query);
        for (k, &p) in picks.iter().enumerate() {
            if k < config.shot {
                support_indices.push(pool[p]);
                support_labels.push(label);
            } else {
                query_indices.push(pool[p]);
                query_labels.push(label);
            }
        }
    }
    Ok(Episode {
        config,
        class_ids,
        support: LabeledSet {
            features: bank.features().select_rows(&support_indices),
            labels: support_labels,
        },
        query: LabeledSet {
            features: bank.features().select_rows(&query_indices),
            labels: query_labels,
        },
        support_indices,
        query_indices,
    })
}

/// `S ∪ Ŝ`: the original support rows followed by one rectified copy of each,
/// carrying the same labels.
pub fn augment_support(support: &LabeledSet, model: &CcfModel) -> Result<LabeledSet> {
    if support.features.cols() != model.feature_dim() {
        return Err(Error::Shape(format!(
            "support features have {} dimensions, model expects {}",
            support.features.cols(),
            model.feature_dim()
        )));
    }
    let rectified = model.rectify_batch(&support.features)?;
    let mut data = support.features.data().to_vec();
    data.extend_from_slice(rectified.data());
    let mut labels = support.labels.clone();
    labels.extend_from_slice(&support.labels);
    Ok(LabeledSet {
        features: Matrix::new(2 * support.len(), support.features.cols(), data)?,
        labels,
    })
}
