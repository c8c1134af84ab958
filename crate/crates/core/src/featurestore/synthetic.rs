use serde::{Deserialize, Serialize};

use super::bank::{FeatureBank, Split};
use crate::error::{Error, Result};
use crate::numcore::{Matrix, Rng};

/// Parameters of a synthetic bank.
///
/// Base centroids have i.i.d. `N(centroid_offset, centroid_scale²)` entries. Validation and
/// novel centroids are `ρ·(convex mixture of 2–3 base centroids) + (1−ρ)·fresh`
/// where `fresh` is drawn like a base centroid and `ρ = novel_correlation`.
/// Samples add i.i.d. `N(0, within_class_stddev²)` noise to their centroid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n_base_classes: usize,
    pub n_val_classes: usize,
    pub n_novel_classes: usize,
    pub feature_dim: usize,
    pub samples_per_class: usize,
    /// Mean of every centroid coordinate.
    pub centroid_offset: f64,
    pub centroid_scale: f64,
    pub within_class_stddev: f64,
    pub novel_correlation: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_base_classes: 64,
            n_val_classes: 16,
            n_novel_classes: 20,
            feature_dim: 64,
            samples_per_class: 100,
            centroid_offset: 0.0,
            centroid_scale: 0.1,
            within_class_stddev: 0.12,
            novel_correlation: 0.8,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_base_classes", self.n_base_classes),
            ("n_novel_classes", self.n_novel_classes),
            ("feature_dim", self.feature_dim),
            ("samples_per_class", self.samples_per_class),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive")));
        }
        if !self.centroid_offset.is_finite() {
            return Err(Error::InvalidArgument(
                "centroid_offset must be finite".into(),
            ));
        }
        if !(self.centroid_scale > 0.0 && self.centroid_scale.is_finite()) {
            return Err(Error::InvalidArgument(
                "centroid_scale must be positive and finite".into(),
            ));
        }
        // zero noise is allowed: it gives the degenerate centroid-exact bank
        if !(self.within_class_stddev >= 0.0 && self.within_class_stddev.is_finite()) {
            return Err(Error::InvalidArgument(
                "within_class_stddev must be non-negative and finite".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.novel_correlation) {
            return Err(Error::InvalidArgument(
                "novel_correlation must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }

    pub fn n_classes(&self) -> usize {
        self.n_base_classes + self.n_val_classes + self.n_novel_classes
    }
}

/// Generates a bank with class ids ordered base, validation, novel. Values are
/// rounded to `f32` precision so that saving and reloading is lossless.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<FeatureBank> {
    spec.validate()?;
    let mut rng = Rng::new(spec.seed);
    let dim = spec.feature_dim;

    let fresh = |rng: &mut Rng| -> Vec<f64> {
        (0..dim)
            .map(|_| spec.centroid_offset + spec.centroid_scale * rng.normal())
            .collect()
    };

    let base: Vec<Vec<f64>> = (0..spec.n_base_classes).map(|_| fresh(&mut rng)).collect();
    let mut centroids = base.clone();
    let mut splits = vec![Split::Base; spec.n_base_classes];
    for split in [Split::Validation, Split::Novel] {
        let count = match split {
            Split::Validation => spec.n_val_classes,
            _ => spec.n_novel_classes,
        };
        for _ in 0..count {
            let parents = (2 + rng.below(2) as usize).min(base.len());
            let picks = rng.sample_indices(base.len(), parents);
            // uniform point on the simplex via normalized exponentials
            let weights: Vec<f64> = (0..parents).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
            let total: f64 = weights.iter().sum();
            let own = fresh(&mut rng);
            let rho = spec.novel_correlation;
            let c: Vec<f64> = (0..dim)
                .map(|j| {
                    let mix: f64 = picks
                        .iter()
                        .zip(&weights)
                        .map(|(&p, &w)| w / total * base[p][j])
                        .sum();
                    rho * mix + (1.0 - rho) * own[j]
                })
                .collect();
            centroids.push(c);
            splits.push(split);
        }
    }

    let n = centroids.len() * spec.samples_per_class;
    let mut data = Vec::with_capacity(n * dim);
    let mut labels = Vec::with_capacity(n);
    for (class, c) in centroids.iter().enumerate() {
        for _ in 0..spec.samples_per_class {
            for &m in c {
                let x = m + spec.within_class_stddev * rng.normal();
                data.push(x as f32 as f64);
            }
            labels.push(class as u32);
        }
    }
    FeatureBank::new(Matrix::new(n, dim, data)?, labels, splits, Vec::new())
}
