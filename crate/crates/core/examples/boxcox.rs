//! Box-Cox preprocessing: pick λ by likelihood on the base split and apply
//! the transform to a whole bank.

use ccf::featurestore::{FeatureBank, Split};
use ccf::numcore::{Matrix, Rng};
use ccf::pipeline::{prepare, BoxCoxConfig};
use ccf::preprocess::{boxcox_log_likelihood, boxcox_scalar, BoxCoxParams};

fn skewness(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    m3 / m2.powf(1.5)
}

fn main() -> ccf::Result<()> {
    println!("(x^λ - 1)/λ at x = 4:");
    for lambda in [-1.0, 0.0, 0.5, 1.0, 2.0] {
        println!("  λ = {lambda:4}: {:.6}", boxcox_scalar(4.0, lambda));
    }

    // non-negative, right-skewed features, much like post-ReLU activations
    let mut rng = Rng::new(11);
    let (n, dim) = (600, 8);
    let data: Vec<f64> = (0..n * dim)
        .map(|_| ((0.8 * rng.normal()).exp() as f32) as f64)
        .collect();
    let labels = (0..n).map(|i| (i % 3) as u32).collect();
    let bank = FeatureBank::new(
        Matrix::new(n, dim, data)?,
        labels,
        vec![Split::Base, Split::Validation, Split::Novel],
        Vec::new(),
    )?;

    let config = BoxCoxConfig {
        fit: true,
        ..BoxCoxConfig::default()
    };
    let (params, transformed) = prepare(&bank, &config)?;
    let BoxCoxParams { lambda, shift } = params.expect("transform enabled");
    println!("fitted λ = {lambda} with shift {shift:.2e}");

    let base = bank.samples_in(Split::Base);
    let pooled: Vec<f64> = base
        .iter()
        .flat_map(|&i| bank.feature(i))
        .map(|v| v + shift)
        .collect();
    for l in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let mark = if l == lambda { "  <- chosen" } else { "" };
        println!(
            "  log-likelihood at λ = {l:4}: {:8.1}{mark}",
            boxcox_log_likelihood(&pooled, l)
        );
    }
    let after: Vec<f64> = base
        .iter()
        .flat_map(|&i| transformed.feature(i))
        .copied()
        .collect();
    println!(
        "skewness of base values: {:.3} before, {:.3} after",
        skewness(&pooled),
        skewness(&after)
    );
    Ok(())
}
