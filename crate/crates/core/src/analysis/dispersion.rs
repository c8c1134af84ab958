use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featurestore::{FeatureBank, Split};
use crate::model::CcfModel;
use crate::numcore::{l2_distance, Matrix};

/// How tightly latent codes cluster by class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentDispersion {
    /// Mean over classes of the mean squared distance of `z` to its class mean.
    pub intra_class_variance: f64,
    /// Mean pairwise distance between class-mean codes.
    pub between_class_spread: f64,
    /// Mean squared distance of every code to the mean of all codes.
    pub total_variance: f64,
    /// `intra_class_variance / total_variance`: the share of latent variance
    /// left within classes, independent of the overall scale of `z`.
    pub within_class_fraction: f64,
    /// `(class id, variance)` for every class in the split.
    pub per_class_variance: Vec<(usize, f64)>,
}

/// Encodes every sample of `split` and measures its class structure.
pub fn latent_dispersion(
    bank: &FeatureBank,
    model: &CcfModel,
    split: Split,
) -> Result<LatentDispersion> {
    let classes = bank.classes_in(split);
    let groups = classes
        .iter()
        .map(|&c| model.encode_batch(&bank.features().select_rows(bank.samples_of(c))))
        .collect::<Result<Vec<_>>>()?;
    latent_dispersion_of(&classes, &groups)
}

/// Dispersion of pre-computed codes, one matrix per class. A class with a
/// single sample has zero variance.
pub fn latent_dispersion_of(class_ids: &[usize], groups: &[Matrix]) -> Result<LatentDispersion> {
    if groups.is_empty() || groups.len() != class_ids.len() {
        return Err(Error::InvalidArgument(
            "need one non-empty group per class".into(),
        ));
    }
    let mut means = Vec::with_capacity(groups.len());
    let mut per_class_variance = Vec::with_capacity(groups.len());
    for (&c, z) in class_ids.iter().zip(groups) {
        if z.rows() == 0 {
            return Err(Error::Validation(format!("class {c} has no samples")));
        }
        let n = z.rows() as f64;
        let mean: Vec<f64> = z.col_sums().into_iter().map(|s| s / n).collect();
        let var = z
            .iter_rows()
            .map(|v| l2_distance(v, &mean).powi(2))
            .sum::<f64>()
            / n;
        per_class_variance.push((c, var));
        means.push(mean);
    }
    let n_total: usize = groups.iter().map(Matrix::rows).sum();
    let dim = groups[0].cols();
    let mut grand = vec![0.0; dim];
    for z in groups {
        for (g, s) in grand.iter_mut().zip(z.col_sums()) {
            *g += s;
        }
    }
    grand.iter_mut().for_each(|g| *g /= n_total as f64);
    let total_variance = groups
        .iter()
        .flat_map(|z| z.iter_rows())
        .map(|v| l2_distance(v, &grand).powi(2))
        .sum::<f64>()
        / n_total as f64;
    let intra = per_class_variance.iter().map(|(_, v)| v).sum::<f64>() / groups.len() as f64;
    let mut spread = 0.0;
    let mut pairs = 0usize;
    for i in 0..means.len() {
        for j in i + 1..means.len() {
            spread += l2_distance(&means[i], &means[j]);
            pairs += 1;
        }
    }
    Ok(LatentDispersion {
        intra_class_variance: intra,
        between_class_spread: if pairs > 0 {
            spread / pairs as f64
        } else {
            0.0
        },
        total_variance,
        within_class_fraction: if total_variance > 0.0 {
            intra / total_variance
        } else {
            0.0
        },
        per_class_variance,
    })
}
