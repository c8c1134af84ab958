//! Train a corrector on the base classes of a synthetic bank with early
//! stopping on validation episodes, then save and reload the checkpoint.
//!
//! The hidden layer is narrower than the 2048 default to keep the example
//! quick; pass `--full` to use the default size.

use ccf::featurestore::{generate_synthetic, SyntheticSpec};
use ccf::fewshot::{ClassifierSpec, EpisodeConfig};
use ccf::model::{
    load_checkpoint, save_checkpoint, train_with_validation, Architecture, Checkpoint,
    CheckpointMeta, TrainConfig,
};

fn main() -> ccf::Result<()> {
    let full = std::env::args().any(|a| a == "--full");
    let bank = generate_synthetic(&SyntheticSpec::default())?;
    let config = TrainConfig {
        learning_rate: 1e-3,
        max_epochs: 30,
        patience: 5,
        val_episodes: 100,
        architecture: Architecture {
            hidden_dim: if full { 2048 } else { 256 },
            // the synthetic features are centred on zero
            decoder_activation: false,
            ..Architecture::default()
        },
        ..TrainConfig::default()
    };
    let trained = train_with_validation(
        &bank,
        &config,
        EpisodeConfig::default(),
        &ClassifierSpec::default(),
    )?;

    println!("epoch      mse       ce     ‖z‖²   val acc");
    for e in &trained.log.epochs {
        println!(
            "{:5} {:8.4} {:8.4} {:8.3}   {}",
            e.epoch,
            e.mse,
            e.ce,
            e.frob,
            e.val_accuracy.map_or("-".into(), |a| format!("{a:.4}"))
        );
    }
    println!(
        "kept epoch {} (validation accuracy {:.4}), stopped early: {}",
        trained.log.best_epoch,
        trained.log.best_val_accuracy.unwrap_or(f64::NAN),
        trained.log.stopped_early
    );

    let path = std::env::temp_dir().join("ccf-example.ckpt");
    let checkpoint = Checkpoint {
        model: trained.model,
        meta: CheckpointMeta {
            train_config: config,
            boxcox: None,
            provenance: serde_json::json!({ "example": "train_corrector" }),
        },
    };
    save_checkpoint(&checkpoint, &path)?;
    let restored = load_checkpoint(&path)?;
    assert_eq!(restored, checkpoint);
    println!(
        "saved {} parameters to {}",
        restored.model.n_parameters(),
        path.display()
    );
    Ok(())
}
