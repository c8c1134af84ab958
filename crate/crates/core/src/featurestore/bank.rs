use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::Matrix;

/// Which partition a class belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Base,
    #[serde(rename = "val")]
    Validation,
    Novel,
}

impl Split {
    pub fn tag(self) -> u8 {
        match self {
            Split::Base => 0,
            Split::Validation => 1,
            Split::Novel => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Split::Base),
            1 => Some(Split::Validation),
            2 => Some(Split::Novel),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Base => "base",
            Split::Validation => "val",
            Split::Novel => "novel",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(Split::Base),
            "val" | "validation" => Ok(Split::Validation),
            "novel" => Ok(Split::Novel),
            other => Err(Error::InvalidArgument(format!(
                "unknown split {other:?}, expected base, val or novel"
            ))),
        }
    }
}

/// Immutable store of labeled feature vectors.
///
/// Class ids are dense (`0..n_classes`) and each class belongs to exactly one
/// split, which makes the base, validation and novel class sets disjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureBank {
    features: Matrix,
    labels: Vec<u32>,
    splits: Vec<Split>,
    class_names: Vec<String>,
    by_class: Vec<Vec<usize>>,
}

impl FeatureBank {
    /// Validates and assembles a bank. `class_names` may be empty, otherwise
    /// it must have one (possibly empty) name per class.
    pub fn new(
        features: Matrix,
        labels: Vec<u32>,
        splits: Vec<Split>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(Error::Validation(format!(
                "{} labels for {} feature rows",
                labels.len(),
                features.rows()
            )));
        }
        if features.cols() == 0 {
            return Err(Error::Validation("feature dimension is zero".into()));
        }
        if splits.is_empty() {
            return Err(Error::Validation("bank has no classes".into()));
        }
        let class_names = if class_names.is_empty() {
            vec![String::new(); splits.len()]
        } else {
            class_names
        };
        if class_names.len() != splits.len() {
            return Err(Error::Validation(format!(
                "{} class names for {} classes",
                class_names.len(),
                splits.len()
            )));
        }
        if let Some(i) = features.data().iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite feature value at sample {}, dimension {}",
                i / features.cols(),
                i % features.cols()
            )));
        }
        let mut by_class = vec![Vec::new(); splits.len()];
        for (i, &c) in labels.iter().enumerate() {
            let slot = by_class.get_mut(c as usize).ok_or_else(|| {
                Error::Validation(format!(
                    "sample {i} has class id {c}, bank has {} classes",
                    splits.len()
                ))
            })?;
            slot.push(i);
        }
        if let Some(c) = by_class.iter().position(Vec::is_empty) {
            return Err(Error::Validation(format!("class {c} has no samples")));
        }
        Ok(Self {
            features,
            labels,
            splits,
            class_names,
            by_class,
        })
    }

    pub fn feature_dim(&self) -> usize {
        self.features.cols()
    }

    pub fn n_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn n_classes(&self) -> usize {
        self.splits.len()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn feature(&self, sample: usize) -> &[f64] {
        self.features.row(sample)
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn split_of(&self, class: usize) -> Split {
        self.splits[class]
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Sample indices of `class`, in file order.
    pub fn samples_of(&self, class: usize) -> &[usize] {
        &self.by_class[class]
    }

    /// Class ids assigned to `split`, ascending.
    pub fn classes_in(&self, split: Split) -> Vec<usize> {
        (0..self.n_classes())
            .filter(|&c| self.splits[c] == split)
            .collect()
    }

    /// Sample indices whose class belongs to `split`, in file order.
    pub fn samples_in(&self, split: Split) -> Vec<usize> {
        (0..self.n_samples())
            .filter(|&i| self.splits[self.labels[i] as usize] == split)
            .collect()
    }

    /// Same bank with every feature row replaced by `f(row)`.
    pub fn map_features<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Result<Vec<f64>>,
    {
        let mut data = Vec::with_capacity(self.features.data().len());
        let mut dim = None;
        for row in self.features.iter_rows() {
            let out = f(row)?;
            if *dim.get_or_insert(out.len()) != out.len() {
                return Err(Error::Shape("mapped rows differ in length".into()));
            }
            data.extend(out);
        }
        let features = Matrix::new(self.n_samples(), dim.unwrap_or(0), data)?;
        Self::new(
            features,
            self.labels.clone(),
            self.splits.clone(),
            self.class_names.clone(),
        )
    }
}

/// Per-class feature means for one split.
#[derive(Debug, Clone, PartialEq)]
pub struct Centroids {
    /// Bank class id of each row of `means`.
    pub class_ids: Vec<usize>,
    pub means: Matrix,
}

impl Centroids {
    /// Row of `means` for a bank class id.
    pub fn of(&self, class: usize) -> Option<&[f64]> {
        self.class_ids
            .iter()
            .position(|&c| c == class)
            .map(|r| self.means.row(r))
    }
}

/// Mean feature of every class in `split`.
pub fn class_centroids(bank: &FeatureBank, split: Split) -> Result<Centroids> {
    let class_ids = bank.classes_in(split);
    if class_ids.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "split {split} has no classes"
        )));
    }
    let dim = bank.feature_dim();
    let mut means = Matrix::zeros(class_ids.len(), dim);
    for (r, &c) in class_ids.iter().enumerate() {
        let samples = bank.samples_of(c);
        if samples.is_empty() {
            return Err(Error::Validation(format!("class {c} has no samples")));
        }
        let row = means.row_mut(r);
        for &i in samples {
            for (m, &x) in row.iter_mut().zip(bank.feature(i)) {
                *m += x;
            }
        }
        let n = samples.len() as f64;
        for m in row.iter_mut() {
            *m /= n;
        }
    }
    Ok(Centroids { class_ids, means })
}
