//! Compare the analytic loss gradients of a small corrector with central
//! finite differences.

use ccf::model::{gradients, loss, Architecture, Batch, CcfModel, LossWeights};
use ccf::numcore::{Matrix, Rng};

fn main() -> ccf::Result<()> {
    let arch = Architecture {
        hidden_dim: 6,
        ..Architecture::default()
    };
    let mut model = CcfModel::new(5, 3, arch, 1)?;
    let mut rng = Rng::new(2);
    let x = Matrix::new(4, 5, (0..20).map(|_| rng.normal()).collect())?;
    let batch = Batch::new(x, vec![0, 2, 1, 2])?;
    let weights = LossWeights {
        temperature: 0.5,
        beta: 0.05,
        ce_weight: 1.0,
    };

    let (parts, grads) = gradients(&model, &batch, &weights)?;
    println!(
        "loss {:.6} = mse {:.6} + ce {:.6} + β·{:.6}",
        parts.total, parts.mse, parts.ce, parts.frob
    );
    let analytic: Vec<Vec<f64>> = grads.buffers().iter().map(|b| b.to_vec()).collect();
    let h = 1e-5;
    for (name, (k, g)) in ["W1", "b1", "W2", "b2", "W3", "b3"]
        .iter()
        .zip(analytic.iter().enumerate())
    {
        let mut worst = 0.0f64;
        for (j, &a) in g.iter().enumerate() {
            let orig = model.buffers()[k][j];
            model.buffers_mut()[k][j] = orig + h;
            let up = loss(&model, &batch, &weights)?.total;
            model.buffers_mut()[k][j] = orig - h;
            let down = loss(&model, &batch, &weights)?.total;
            model.buffers_mut()[k][j] = orig;
            let numeric = (up - down) / (2.0 * h);
            worst = worst.max((a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6));
        }
        println!(
            "{name:>3}: {:3} entries, worst relative error {worst:.2e}",
            g.len()
        );
    }
    Ok(())
}
