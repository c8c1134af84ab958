use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::episode::LabeledSet;
use crate::error::{Error, Result};
use crate::numcore::{dot, l2_distance, norm_sq, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    /// Multinomial logistic regression (also serves as the softmax classifier).
    LogisticRegression,
    /// Cosine similarity to class prototypes.
    Cosine,
    /// Negative Euclidean distance to class prototypes.
    NearestCentroid,
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassifierKind::LogisticRegression => "logistic_regression",
            ClassifierKind::Cosine => "cosine",
            ClassifierKind::NearestCentroid => "nearest_centroid",
        })
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logistic_regression" | "lr" | "softmax" => Ok(ClassifierKind::LogisticRegression),
            "cosine" => Ok(ClassifierKind::Cosine),
            "nearest_centroid" | "ncm" => Ok(ClassifierKind::NearestCentroid),
            other => Err(Error::InvalidArgument(format!(
                "unknown classifier {other:?}, expected logistic_regression, cosine or nearest_centroid"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    /// L2 penalty `(λ/2)‖W‖²` added to the summed cross-entropy.
    pub l2: f64,
    pub max_iterations: usize,
    /// Gradient-descent step; `None` uses `1/L` from the curvature bound.
    pub learning_rate: Option<f64>,
    /// Stop once every gradient entry is below this in magnitude.
    pub tolerance: f64,
}

impl Default for ClassifierSpec {
    fn default() -> Self {
        Self {
            kind: ClassifierKind::LogisticRegression,
            l2: 1.0,
            max_iterations: 1000,
            learning_rate: None,
            tolerance: 1e-6,
        }
    }
}

impl ClassifierSpec {
    pub fn of_kind(kind: ClassifierKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == ClassifierKind::LogisticRegression {
            if !(self.l2 >= 0.0 && self.l2.is_finite()) {
                return Err(Error::InvalidArgument(
                    "classifier l2 must be non-negative".into(),
                ));
            }
            if self.max_iterations == 0 {
                return Err(Error::InvalidArgument(
                    "classifier max_iterations must be positive".into(),
                ));
            }
            if let Some(lr) = self.learning_rate {
                if !(lr > 0.0 && lr.is_finite()) {
                    return Err(Error::InvalidArgument(
                        "classifier learning_rate must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Logistic {
        /// One row per class.
        weights: Matrix,
        bias: Vec<f64>,
        iterations: usize,
    },
    Cosine {
        prototypes: Matrix,
    },
    NearestCentroid {
        prototypes: Matrix,
    },
}

impl Classifier {
    pub fn n_classes(&self) -> usize {
        match self {
            Classifier::Logistic { weights, .. } => weights.rows(),
            Classifier::Cosine { prototypes } | Classifier::NearestCentroid { prototypes } => {
                prototypes.rows()
            }
        }
    }

    /// Per-class scores; higher is better.
    pub fn scores(&self, query: &[f64]) -> Vec<f64> {
        match self {
            Classifier::Logistic { weights, bias, .. } => weights
                .iter_rows()
                .zip(bias)
                .map(|(w, b)| dot(w, query) + b)
                .collect(),
            Classifier::Cosine { prototypes } => {
                let qn = norm_sq(query).sqrt();
                prototypes
                    .iter_rows()
                    .map(|p| {
                        let denom = qn * norm_sq(p).sqrt();
                        if denom > 0.0 {
                            dot(p, query) / denom
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
            Classifier::NearestCentroid { prototypes } => prototypes
                .iter_rows()
                .map(|p| -l2_distance(p, query))
                .collect(),
        }
    }

    /// Class probabilities of the logistic model (softmax of the scores).
    pub fn probabilities(&self, query: &[f64]) -> Option<Vec<f64>> {
        match self {
            Classifier::Logistic { .. } => {
                Some(crate::numcore::softmax_t(&self.scores(query), 1.0).ok()?)
            }
            _ => None,
        }
    }

    /// Highest-scoring label; exact ties go to the lowest label.
    pub fn predict(&self, query: &[f64]) -> usize {
        argmax_first(&self.scores(query))
    }
}

pub(crate) fn argmax_first(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

fn prototypes(support: &LabeledSet, n_classes: usize) -> Matrix {
    let mut sums = Matrix::zeros(n_classes, support.features.cols());
    let mut counts = vec![0usize; n_classes];
    for (row, &l) in support.features.iter_rows().zip(&support.labels) {
        counts[l] += 1;
        for (s, &x) in sums.row_mut(l).iter_mut().zip(row) {
            *s += x;
        }
    }
    for (c, &n) in counts.iter().enumerate() {
        for s in sums.row_mut(c) {
            *s /= n as f64;
        }
    }
    sums
}

/// Fits a classifier on labeled support features with labels `0..N`.
pub fn fit_classifier(support: &LabeledSet, spec: &ClassifierSpec) -> Result<Classifier> {
    spec.validate()?;
    if support.is_empty() {
        return Err(Error::InvalidArgument("empty support set".into()));
    }
    let n_classes = support.labels.iter().max().map_or(0, |m| m + 1);
    let mut seen = vec![false; n_classes];
    for &l in &support.labels {
        seen[l] = true;
    }
    if let Some(c) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidArgument(format!(
            "support has no sample of class {c}"
        )));
    }
    Ok(match spec.kind {
        ClassifierKind::Cosine => Classifier::Cosine {
            prototypes: prototypes(support, n_classes),
        },
        ClassifierKind::NearestCentroid => Classifier::NearestCentroid {
            prototypes: prototypes(support, n_classes),
        },
        ClassifierKind::LogisticRegression => fit_logistic(support, n_classes, spec),
    })
}

/// Largest eigenvalue of `X̃X̃ᵀ` (X̃ = X with a ones column) by power iteration.
fn gram_spectral_radius(x: &Matrix) -> f64 {
    let n = x.rows();
    let mut gram = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let g = dot(x.row(i), x.row(j)) + 1.0;
            gram.set(i, j, g);
            gram.set(j, i, g);
        }
    }
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = 0.0;
    for _ in 0..200 {
        let w = gram.matvec(&v).expect("square");
        let norm = norm_sq(&w).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm;
        v = w.into_iter().map(|x| x / norm).collect();
        if (next - lambda).abs() <= 1e-10 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda
}

/// Full-batch gradient descent on `Σᵢ CE(softmax(W xᵢ + b), yᵢ) + (λ/2)‖W‖²`.
fn fit_logistic(support: &LabeledSet, n_classes: usize, spec: &ClassifierSpec) -> Classifier {
    let x = &support.features;
    let dim = x.cols();
    // softmax cross-entropy has Hessian ≤ ½·I in the logits
    let lipschitz = 0.5 * gram_spectral_radius(x) + spec.l2;
    let step = spec.learning_rate.unwrap_or(if lipschitz > 0.0 {
        1.0 / lipschitz
    } else {
        1.0
    });

    let mut weights = Matrix::zeros(n_classes, dim);
    let mut bias = vec![0.0; n_classes];
    let mut grad_w = Matrix::zeros(n_classes, dim);
    let mut grad_b = vec![0.0; n_classes];
    let mut iterations = 0;
    while iterations < spec.max_iterations {
        for (gw, w) in grad_w.data_mut().iter_mut().zip(weights.data()) {
            *gw = spec.l2 * w;
        }
        grad_b.fill(0.0);
        for (row, &label) in x.iter_rows().zip(&support.labels) {
            let mut logits: Vec<f64> = weights
                .iter_rows()
                .zip(&bias)
                .map(|(w, b)| dot(w, row) + b)
                .collect();
            let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut sum = 0.0;
            for l in &mut logits {
                *l = (*l - max).exp();
                sum += *l;
            }
            for (c, p) in logits.iter().enumerate() {
                let r = p / sum - if c == label { 1.0 } else { 0.0 };
                grad_b[c] += r;
                for (g, &xi) in grad_w.row_mut(c).iter_mut().zip(row) {
                    *g += r * xi;
                }
            }
        }
        let worst = grad_w
            .data()
            .iter()
            .chain(&grad_b)
            .fold(0.0f64, |m, g| m.max(g.abs()));
        if worst < spec.tolerance {
            break;
        }
        for (w, g) in weights.data_mut().iter_mut().zip(grad_w.data()) {
            *w -= step * g;
        }
        for (b, g) in bias.iter_mut().zip(&grad_b) {
            *b -= step * g;
        }
        iterations += 1;
    }
    Classifier::Logistic {
        weights,
        bias,
        iterations,
    }
}
