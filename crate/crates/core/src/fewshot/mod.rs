//! Episodic N-way K-shot evaluation.
//!
//! An episode draws N classes from a split, then K support and Q query samples
//! per class. With a corrector model the support set is doubled by one
//! rectified copy of every support feature before the classifier is fit.

mod classifier;
mod episode;
mod evaluate;

pub use classifier::{fit_classifier, Classifier, ClassifierKind, ClassifierSpec};
pub use episode::{augment_support, sample_episode, Episode, EpisodeConfig, LabeledSet};
pub use evaluate::{evaluate, run_episode, EvalReport};
