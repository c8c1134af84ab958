//! The category-correlated feature corrector.
//!
//! An autoencoder whose bottleneck has exactly one unit per base class:
//!
//! ```text
//! encoder  z  = W2ᵀ·act(W1ᵀx + b1) + b2      (z: logits over base classes)
//! decoder  x̂ = act(W3ᵀz + b3)
//! loss     L  = ‖x − x̂‖² + CE(softmax(z/T), y) + β‖z‖²     (batch means)
//! ```
//!
//! Gradients are derived by hand in [`loss`]; [`train`] runs mini-batch Adam
//! with early stopping on validation few-shot accuracy.

mod checkpoint;
mod loss;
mod network;
mod train;

pub use checkpoint::{
    load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, Checkpoint,
    CheckpointMeta, CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
};
pub use loss::{
    gradients, loss, reconstruction_error, Batch, Gradients, LossBreakdown, LossWeights,
};
pub use network::{Architecture, CcfModel, ForwardCache};
pub use train::{train, train_with_validation, EpochRecord, TrainConfig, TrainLog, TrainedModel};
