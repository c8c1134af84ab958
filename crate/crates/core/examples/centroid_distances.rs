//! How far features sit from their class centre before and after
//! rectification, plus latent clustering statistics and CSV exports for
//! external plotting.

use std::fs::File;
use std::io::BufWriter;

use ccf::analysis::{
    centroid_distances, latent_dispersion, write_distance_csv, write_labeled_matrix_csv,
};
use ccf::featurestore::{generate_synthetic, Split, SyntheticSpec};
use ccf::fewshot::{ClassifierSpec, EpisodeConfig};
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
    let model = train_with_validation(
        &bank,
        &config,
        EpisodeConfig::default(),
        &ClassifierSpec::default(),
    )?
    .model;

    println!("split      d    d_hat  ratio  z within-class share");
    for split in [Split::Base, Split::Novel] {
        let r = centroid_distances(&bank, split, &model)?;
        let z = latent_dispersion(&bank, &model, split)?;
        println!(
            "{:<6} {:.4} {:.4}  {:.3}  {:.3}",
            split.to_string(),
            r.mean_d,
            r.mean_d_hat,
            r.ratio(),
            z.within_class_fraction
        );
    }

    let dir = std::env::temp_dir().join("ccf-distances-example");
    std::fs::create_dir_all(&dir).map_err(|e| ccf::Error::io(&dir, e))?;
    let open = |name: &str| {
        let p = dir.join(name);
        File::create(&p)
            .map(BufWriter::new)
            .map_err(|e| ccf::Error::io(p, e))
    };
    write_distance_csv(
        &centroid_distances(&bank, Split::Novel, &model)?,
        &mut open("novel_distances.csv")?,
    )?;
    let samples = bank.samples_in(Split::Novel);
    let x = bank.features().select_rows(&samples);
    let labels: Vec<u32> = samples.iter().map(|&i| bank.labels()[i]).collect();
    write_labeled_matrix_csv(
        &model.encode_batch(&x)?,
        &labels,
        "z",
        &mut open("novel_z.csv")?,
    )?;
    write_labeled_matrix_csv(
        &model.rectify_batch(&x)?,
        &labels,
        "x",
        &mut open("novel_rectified.csv")?,
    )?;
    println!("CSV exports in {}", dir.display());
    Ok(())
}
