use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featurestore::{class_centroids, FeatureBank, Split};
use crate::model::CcfModel;
use crate::numcore::{l2_distance, Matrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDistance {
    pub class_id: usize,
    pub n_samples: usize,
    pub mean_d: f64,
    pub mean_d_hat: f64,
}

/// Mean distance of original (`d`) and rectified (`d_hat`) features to their
/// ground-truth class mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub split: Split,
    pub n_samples: usize,
    pub mean_d: f64,
    pub mean_d_hat: f64,
    pub per_class: Vec<ClassDistance>,
}

impl DistanceReport {
    /// `mean_d_hat / mean_d`; below 1 means rectification pulled features in.
    pub fn ratio(&self) -> f64 {
        self.mean_d_hat / self.mean_d
    }
}

pub fn centroid_distances(
    bank: &FeatureBank,
    split: Split,
    model: &CcfModel,
) -> Result<DistanceReport> {
    centroid_distances_with(bank, split, |x| model.rectify_batch(x))
}

/// Like [`centroid_distances`] with an arbitrary feature map in place of the
/// model. Centroids are the means of the unmapped features.
pub fn centroid_distances_with<F>(
    bank: &FeatureBank,
    split: Split,
    map: F,
) -> Result<DistanceReport>
where
    F: Fn(&Matrix) -> Result<Matrix>,
{
    let centroids = class_centroids(bank, split)?;
    let mut per_class = Vec::with_capacity(centroids.class_ids.len());
    let (mut sum_d, mut sum_d_hat, mut total) = (0.0, 0.0, 0usize);
    for (r, &class_id) in centroids.class_ids.iter().enumerate() {
        let samples = bank.samples_of(class_id);
        let x = bank.features().select_rows(samples);
        let x_hat = map(&x)?;
        if x_hat.rows() != x.rows() || x_hat.cols() != x.cols() {
            return Err(Error::Shape(format!(
                "feature map returned {}x{}, expected {}x{}",
                x_hat.rows(),
                x_hat.cols(),
                x.rows(),
                x.cols()
            )));
        }
        let center = centroids.means.row(r);
        let d: f64 = x.iter_rows().map(|v| l2_distance(v, center)).sum();
        let d_hat: f64 = x_hat.iter_rows().map(|v| l2_distance(v, center)).sum();
        let n = samples.len();
        sum_d += d;
        sum_d_hat += d_hat;
        total += n;
        per_class.push(ClassDistance {
            class_id,
            n_samples: n,
            mean_d: d / n as f64,
            mean_d_hat: d_hat / n as f64,
        });
    }
    Ok(DistanceReport {
        split,
        n_samples: total,
        mean_d: sum_d / total as f64,
        mean_d_hat: sum_d_hat / total as f64,
        per_class,
    })
}
