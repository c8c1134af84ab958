//! Sample an N-way K-shot episode, augment its support set with rectified
//! features and classify the queries.

use ccf::featurestore::{generate_synthetic, Split, SyntheticSpec};
use ccf::fewshot::{
    augment_support, fit_classifier, sample_episode, ClassifierSpec, EpisodeConfig,
};
use ccf::model::{train, Architecture, TrainConfig};
use ccf::numcore::Rng;

fn main() -> ccf::Result<()> {
    let bank = generate_synthetic(&SyntheticSpec::default())?;
    let config = EpisodeConfig {
        way: 5,
        shot: 2,
        query: 15,
    };
    let episode = sample_episode(&bank, Split::Novel, config, &mut Rng::derived(3, 0))?;
    println!(
        "classes {:?}: {} support, {} query",
        episode.class_ids,
        episode.support.len(),
        episode.query.len()
    );

    let model = train(
        &bank,
        &TrainConfig {
            learning_rate: 1e-3,
            max_epochs: 5,
            val_episodes: 0,
            architecture: Architecture {
                hidden_dim: 128,
                decoder_activation: false,
                ..Architecture::default()
            },
            ..TrainConfig::default()
        },
        |_| Ok(0.0),
    )?
    .model;
    let augmented = augment_support(&episode.support, &model)?;
    println!(
        "augmented support: {} rows (originals first)",
        augmented.len()
    );

    for (name, support) in [("plain", &episode.support), ("augmented", &augmented)] {
        let clf = fit_classifier(support, &ClassifierSpec::default())?;
        let correct = episode
            .query
            .features
            .iter_rows()
            .zip(&episode.query.labels)
            .filter(|(q, &l)| clf.predict(q) == l)
            .count();
        println!(
            "{name:>9}: {correct}/{} queries correct",
            episode.query.len()
        );
    }
    Ok(())
}
