//! Baseline against rectified-support evaluation for each classifier, on the
//! same episodes.

use ccf::featurestore::{generate_synthetic, Split, SyntheticSpec};
use ccf::fewshot::{evaluate, ClassifierKind, ClassifierSpec, EpisodeConfig};
use ccf::model::{train_with_validation, Architecture, TrainConfig};

fn main() -> ccf::Result<()> {
    let bank = generate_synthetic(&SyntheticSpec::default())?;
    let config = TrainConfig {
        learning_rate: 1e-3,
        max_epochs: 30,
        architecture: Architecture {
            hidden_dim: 256,
            decoder_activation: false,
            ..Architecture::default()
        },
        ..TrainConfig::default()
    };
    let episodes = EpisodeConfig::default();
    let model = train_with_validation(&bank, &config, episodes, &ClassifierSpec::default())?.model;

    println!("5-way 1-shot, 600 novel episodes");
    println!("{:<20} {:>16} {:>16}", "classifier", "baseline", "with CCF");
    for kind in [
        ClassifierKind::LogisticRegression,
        ClassifierKind::Cosine,
        ClassifierKind::NearestCentroid,
    ] {
        let spec = ClassifierSpec::of_kind(kind);
        let base = evaluate(&bank, Split::Novel, None, &spec, episodes, 600, 1)?;
        let ccf = evaluate(&bank, Split::Novel, Some(&model), &spec, episodes, 600, 1)?;
        println!(
            "{:<20} {:>7.2} ± {:<5.2} {:>7.2} ± {:<5.2}",
            kind.to_string(),
            100.0 * base.mean_accuracy,
            100.0 * base.ci95_halfwidth,
            100.0 * ccf.mean_accuracy,
            100.0 * ccf.ci95_halfwidth
        );
    }
    Ok(())
}
