//! Reconstruction error and validation accuracy across softmax temperatures.

use ccf::analysis::{temperature_sweep, SweepSettings};
use ccf::featurestore::{generate_synthetic, SyntheticSpec};
use ccf::fewshot::{ClassifierSpec, EpisodeConfig};
use ccf::model::{Architecture, TrainConfig};

fn main() -> ccf::Result<()> {
    let bank = generate_synthetic(&SyntheticSpec::default())?;
    let settings = SweepSettings {
        train: TrainConfig {
            beta: 0.01,
            learning_rate: 3e-3,
            max_epochs: 50,
            // a fixed budget so every temperature trains for the same number of steps
            val_episodes: 0,
            architecture: Architecture {
                hidden_dim: 128,
                decoder_activation: false,
                ..Architecture::default()
            },
            ..TrainConfig::default()
        },
        episodes: EpisodeConfig::default(),
        classifier: ClassifierSpec::default(),
        eval_episodes: 200,
    };
    let temps = [0.02, 0.1, 0.5, 1.0, 2.0];
    let report = temperature_sweep(&bank, &settings, &temps, &[0])?;
    println!("    T   recon error   val acc");
    for row in &report.rows {
        println!(
            "{:5}   {:11.5}   {:.4}",
            row.temperature, row.reconstruction_error, row.val_accuracy
        );
    }
    println!(
        "rank correlation of T with error: {:?}",
        report.error_correlations()
    );
    Ok(())
}
