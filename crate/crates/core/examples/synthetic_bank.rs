//! Generate a synthetic feature bank, write it in both on-disk formats and
//! read it back.
//!
//! ```sh
//! cargo run --example synthetic_bank
//! ```

use ccf::featurestore::{
    class_centroids, generate_synthetic, load_bank, save_bank, splits_path_for, BankFormat, Split,
    SyntheticSpec,
};
use ccf::numcore::l2_distance;

fn main() -> ccf::Result<()> {
    let spec = SyntheticSpec {
        seed: 7,
        ..SyntheticSpec::default()
    };
    let bank = generate_synthetic(&spec)?;
    println!(
        "{} samples, {} classes, dim {}",
        bank.n_samples(),
        bank.n_classes(),
        bank.feature_dim()
    );
    for split in [Split::Base, Split::Validation, Split::Novel] {
        println!(
            "  {split:>5}: {:3} classes, {:5} samples",
            bank.classes_in(split).len(),
            bank.samples_in(split).len()
        );
    }

    // each novel centroid sits near some base centroid by construction
    let base = class_centroids(&bank, Split::Base)?;
    let novel = class_centroids(&bank, Split::Novel)?;
    let nearest: f64 = novel
        .means
        .iter_rows()
        .map(|n| {
            base.means
                .iter_rows()
                .map(|b| l2_distance(n, b))
                .fold(f64::INFINITY, f64::min)
        })
        .sum::<f64>()
        / novel.means.rows() as f64;
    println!("mean distance from a novel centroid to its nearest base centroid: {nearest:.3}");

    let dir = std::env::temp_dir().join("ccf-synthetic-example");
    std::fs::create_dir_all(&dir).map_err(|e| ccf::Error::io(&dir, e))?;
    let binary = dir.join("bank.fbk");
    let csv = dir.join("bank.csv");
    save_bank(&bank, &binary, BankFormat::Binary)?;
    save_bank(&bank, &csv, BankFormat::Csv)?;
    assert_eq!(load_bank(&binary, BankFormat::Binary)?, bank);
    assert_eq!(load_bank(&csv, BankFormat::Csv)?, bank);
    println!(
        "wrote {} and {} (+ {}), both reload identically",
        binary.display(),
        csv.display(),
        splits_path_for(&csv).display()
    );
    Ok(())
}
