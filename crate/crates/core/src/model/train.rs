use serde::{Deserialize, Serialize};

use super::loss::{gradients, Batch, LossWeights};
use super::network::{Architecture, CcfModel};
use crate::error::{Error, Result};
use crate::featurestore::{FeatureBank, Split};
use crate::fewshot::{evaluate, ClassifierSpec, EpisodeConfig};
use crate::numcore::{mix_seed, AdamConfig, AdamState, Rng};

const INIT_STREAM: u64 = 0;
const SHUFFLE_STREAM: u64 = 1;
const VALIDATION_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub temperature: f64,
    /// Weight of the squared latent norm.
    pub beta: f64,
    /// Weight of the tempered cross-entropy; 0 trains a plain autoencoder.
    pub ce_weight: f64,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Validate every this many epochs.
    pub eval_every: usize,
    /// Stop after this many validations without improvement.
    pub patience: usize,
    /// Validation episodes per check; 0 disables early stopping.
    pub val_episodes: usize,
    pub seed: u64,
    pub architecture: Architecture,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            temperature: 0.1,
            beta: 0.05,
            ce_weight: 1.0,
            learning_rate: 1e-4,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            batch_size: 256,
            max_epochs: 100,
            eval_every: 1,
            patience: 10,
            val_episodes: 200,
            seed: 0,
            architecture: Architecture::default(),
        }
    }
}

impl TrainConfig {
    pub fn loss_weights(&self) -> LossWeights {
        LossWeights {
            temperature: self.temperature,
            beta: self.beta,
            ce_weight: self.ce_weight,
        }
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            epsilon: self.adam_epsilon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.loss_weights().validate()?;
        self.architecture.validate()?;
        let positive = [
            ("learning_rate", self.learning_rate),
            ("adam_epsilon", self.adam_epsilon),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidArgument(format!("{name} must be positive")));
        }
        for (name, b) in [
            ("adam_beta1", self.adam_beta1),
            ("adam_beta2", self.adam_beta2),
        ] {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1)")));
            }
        }
        if self.batch_size == 0 || self.max_epochs == 0 || self.eval_every == 0 {
            return Err(Error::InvalidArgument(
                "batch_size, max_epochs and eval_every must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Seed of the fixed validation episodes used for early stopping.
    pub fn validation_seed(&self) -> u64 {
        mix_seed(self.seed, VALIDATION_STREAM)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub mse: f64,
    pub ce: f64,
    pub frob: f64,
    pub total: f64,
    pub val_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainLog {
    pub epochs: Vec<EpochRecord>,
    /// Epoch of the returned checkpoint.
    pub best_epoch: usize,
    pub best_val_accuracy: Option<f64>,
    pub stopped_early: bool,
}

#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub model: CcfModel,
    pub log: TrainLog,
}

/// Mini-batch Adam on the shuffled base split.
///
/// Every `eval_every` epochs `validate` scores the current model; training
/// stops once `patience` consecutive scores fail to beat the best one, and the
/// best-scoring checkpoint is returned. With `val_episodes == 0` the callback
/// is never called and the final model is returned.
pub fn train<F>(bank: &FeatureBank, config: &TrainConfig, mut validate: F) -> Result<TrainedModel>
where
    F: FnMut(&CcfModel) -> Result<f64>,
{
    config.validate()?;
    let base_classes = bank.classes_in(Split::Base);
    if base_classes.is_empty() {
        return Err(Error::InvalidArgument("bank has no base classes".into()));
    }
    let mut latent_index = vec![usize::MAX; bank.n_classes()];
    for (k, &c) in base_classes.iter().enumerate() {
        latent_index[c] = k;
    }
    let mut order = bank.samples_in(Split::Base);

    let mut model = CcfModel::new(
        bank.feature_dim(),
        base_classes.len(),
        config.architecture,
        mix_seed(config.seed, INIT_STREAM),
    )?;
    let lengths: Vec<usize> = model.buffers().iter().map(|b| b.len()).collect();
    let mut adam = AdamState::new(config.adam(), &lengths);
    let mut shuffle_rng = Rng::derived(config.seed, SHUFFLE_STREAM);
    let weights = config.loss_weights();
    let validating = config.val_episodes > 0;

    let mut log = TrainLog {
        epochs: Vec::new(),
        best_epoch: 0,
        best_val_accuracy: None,
        stopped_early: false,
    };
    let mut best: Option<(f64, CcfModel)> = None;
    let mut since_best = 0;

    for epoch in 1..=config.max_epochs {
        shuffle_rng.shuffle(&mut order);
        let mut sums = [0.0; 4];
        for chunk in order.chunks(config.batch_size) {
            let batch = Batch::new(
                bank.features().select_rows(chunk),
                chunk
                    .iter()
                    .map(|&i| latent_index[bank.labels()[i] as usize])
                    .collect(),
            )?;
            let (report, grads) = gradients(&model, &batch, &weights)?;
            if !report.total.is_finite() {
                return Err(Error::Training {
                    epoch,
                    reason: format!("loss became {}", report.total),
                });
            }
            let w = chunk.len() as f64;
            for (s, v) in sums
                .iter_mut()
                .zip([report.mse, report.ce, report.frob, report.total])
            {
                *s += w * v;
            }
            adam.step(&mut model.buffers_mut(), &grads.buffers())?;
            if !model.is_finite() {
                return Err(Error::Training {
                    epoch,
                    reason: "parameters became non-finite".into(),
                });
            }
        }
        let n = order.len() as f64;
        let mut record = EpochRecord {
            epoch,
            mse: sums[0] / n,
            ce: sums[1] / n,
            frob: sums[2] / n,
            total: sums[3] / n,
            val_accuracy: None,
        };

        if validating && epoch % config.eval_every == 0 {
            let acc = validate(&model)?;
            record.val_accuracy = Some(acc);
            if best.as_ref().is_none_or(|(b, _)| acc > *b) {
                best = Some((acc, model.clone()));
                log.best_epoch = epoch;
                log.best_val_accuracy = Some(acc);
                since_best = 0;
            } else {
                since_best += 1;
            }
            log.epochs.push(record);
            if since_best >= config.patience {
                log.stopped_early = epoch < config.max_epochs;
                break;
            }
        } else {
            log.epochs.push(record);
        }
    }

    let model = match best {
        Some((_, m)) => m,
        None => {
            log.best_epoch = log.epochs.len();
            model
        }
    };
    Ok(TrainedModel { model, log })
}

/// [`train`] with early stopping on validation-split episodes that run the
/// full rectify-and-classify pipeline. The same episodes are reused at every
/// check.
pub fn train_with_validation(
    bank: &FeatureBank,
    config: &TrainConfig,
    episodes: EpisodeConfig,
    classifier: &ClassifierSpec,
) -> Result<TrainedModel> {
    if config.val_episodes > 0 {
        episodes.check_split(bank, Split::Validation)?;
    }
    let seed = config.validation_seed();
    train(bank, config, |model| {
        Ok(evaluate(
            bank,
            Split::Validation,
            Some(model),
            classifier,
            episodes,
            config.val_episodes,
            seed,
        )?
        .mean_accuracy)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featurestore::{generate_synthetic, SyntheticSpec};

    fn bank() -> FeatureBank {
        generate_synthetic(&SyntheticSpec {
            n_base_classes: 6,
            n_val_classes: 5,
            n_novel_classes: 5,
            feature_dim: 8,
            samples_per_class: 30,
            seed: 4,
            ..SyntheticSpec::default()
        })
        .unwrap()
    }

    fn config() -> TrainConfig {
        TrainConfig {
            batch_size: 32,
            max_epochs: 5,
            learning_rate: 1e-3,
            val_episodes: 10,
            architecture: Architecture {
                hidden_dim: 16,
                ..Architecture::default()
            },
            ..TrainConfig::default()
        }
    }

    #[test]
    fn zero_patience_keeps_first_checkpoint() {
        let cfg = TrainConfig {
            patience: 0,
            ..config()
        };
        let mut calls = 0;
        let out = train(&bank(), &cfg, |_| {
            calls += 1;
            Ok(0.5)
        })
        .unwrap();
        assert_eq!(calls, 1);
        assert_eq!(out.log.best_epoch, 1);
        assert_eq!(out.log.epochs.len(), 1);
        assert!(out.log.stopped_early);
    }

    #[test]
    fn returns_best_checkpoint() {
        let cfg = TrainConfig {
            patience: 2,
            ..config()
        };
        let scores = [0.2, 0.6, 0.5, 0.55, 0.9];
        let mut snapshots = Vec::new();
        let out = train(&bank(), &cfg, |m| {
            snapshots.push(m.clone());
            Ok(scores[snapshots.len() - 1])
        })
        .unwrap();
        // improvement at epoch 2, then two misses
        assert_eq!(out.log.best_epoch, 2);
        assert_eq!(out.log.epochs.len(), 4);
        assert_eq!(out.model, snapshots[1]);
    }

    #[test]
    fn deterministic() {
        let b = bank();
        let a = train_with_validation(
            &b,
            &config(),
            EpisodeConfig::default(),
            &ClassifierSpec::default(),
        )
        .unwrap();
        let c = train_with_validation(
            &b,
            &config(),
            EpisodeConfig::default(),
            &ClassifierSpec::default(),
        )
        .unwrap();
        assert_eq!(a.model, c.model);
        assert_eq!(a.log, c.log);
    }

    #[test]
    fn loss_decreases() {
        let cfg = TrainConfig {
            val_episodes: 0,
            max_epochs: 20,
            ..config()
        };
        let out = train(&bank(), &cfg, |_| unreachable!()).unwrap();
        assert_eq!(out.log.epochs.len(), 20);
        assert!(out.log.epochs[19].total < out.log.epochs[0].total);
        assert_eq!(out.log.best_epoch, 20);
    }

    #[test]
    fn missing_splits_are_errors() {
        let b = bank();
        let only_novel = b.map_features(|r| Ok(r.to_vec())).unwrap();
        let no_val = crate::featurestore::FeatureBank::new(
            only_novel.features().clone(),
            only_novel.labels().to_vec(),
            only_novel
                .splits()
                .iter()
                .map(|&s| {
                    if s == Split::Validation {
                        Split::Novel
                    } else {
                        s
                    }
                })
                .collect(),
            Vec::new(),
        )
        .unwrap();
        assert!(train_with_validation(
            &no_val,
            &config(),
            EpisodeConfig::default(),
            &ClassifierSpec::default()
        )
        .is_err());
    }

    #[test]
    fn divergence_reports_epoch() {
        let cfg = TrainConfig {
            learning_rate: 1e200,
            val_episodes: 0,
            ..config()
        };
        match train(&bank(), &cfg, |_| Ok(0.0)) {
            Err(Error::Training { epoch, .. }) => assert_eq!(epoch, 1),
            other => panic!("expected divergence, got {:?}", other.map(|t| t.log)),
        }
    }
}
