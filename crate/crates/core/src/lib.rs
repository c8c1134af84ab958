//! Feature-level few-shot classification with a category-correlated feature
//! corrector (CCF).
//!
//! The corrector is an autoencoder whose latent vector is a set of logits over
//! the base classes. It is trained on base-class features with a reconstruction
//! loss, a temperature-scaled cross-entropy on the latent logits and a squared
//! norm penalty on the latent vector. At evaluation time every support feature
//! of a novel-class episode is passed through the autoencoder once, and the
//! rectified copy is added to the support set before a simple classifier is fit.
//!
//! Module map:
//!
//! - [`numcore`]: dense matrices, activations, tempered softmax, Adam, seeded RNG.
//! - [`featurestore`]: feature banks, their on-disk formats, synthetic banks.
//! - [`preprocess`]: Box-Cox power transform and likelihood-based λ selection.
//! - [`model`]: the corrector itself, its loss, gradients, training and checkpoints.
//! - [`fewshot`]: episode sampling, classifiers, episodic evaluation.
//! - [`analysis`]: centroid distances, temperature sweeps, latent dispersion.
//! - [`cli`]: run configuration and the `ccf` command-line surface.
//! - [`pipeline`]: glue that turns a raw bank into a transformed one.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod featurestore;
pub mod fewshot;
pub mod model;
pub mod numcore;
pub mod pipeline;
pub mod preprocess;

pub use error::{Error, Result};
