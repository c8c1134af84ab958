//! Diagnostics that explain what the corrector does to a feature space.
//!
//! All distances and latent statistics are measured in the space the model
//! operates in, i.e. after any Box-Cox transform of the bank.

mod dispersion;
mod distance;
mod export;
mod sweep;

pub use dispersion::{latent_dispersion, latent_dispersion_of, LatentDispersion};
pub use distance::{centroid_distances, centroid_distances_with, ClassDistance, DistanceReport};
pub use export::{write_distance_csv, write_labeled_matrix_csv, write_sweep_csv};
pub use sweep::{spearman, temperature_sweep, SweepReport, SweepRow, SweepSettings};
