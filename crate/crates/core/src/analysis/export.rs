use std::io::Write;

use super::distance::DistanceReport;
use super::sweep::SweepReport;
use crate::error::{Error, Result};
use crate::numcore::Matrix;

fn io(e: std::io::Error) -> Error {
    Error::io("<csv writer>", e)
}

/// One row per class plus an `all` row with the split means.
pub fn write_distance_csv<W: Write>(report: &DistanceReport, w: &mut W) -> Result<()> {
    writeln!(w, "split,class_id,n_samples,mean_d,mean_d_hat").map_err(io)?;
    for c in &report.per_class {
        writeln!(
            w,
            "{},{},{},{},{}",
            report.split, c.class_id, c.n_samples, c.mean_d, c.mean_d_hat
        )
        .map_err(io)?;
    }
    writeln!(
        w,
        "{},all,{},{},{}",
        report.split, report.n_samples, report.mean_d, report.mean_d_hat
    )
    .map_err(io)
}

pub fn write_sweep_csv<W: Write>(report: &SweepReport, w: &mut W) -> Result<()> {
    writeln!(
        w,
        "temperature,seed,reconstruction_error,val_accuracy,epochs_trained"
    )
    .map_err(io)?;
    for r in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.temperature, r.seed, r.reconstruction_error, r.val_accuracy, r.epochs_trained
        )
        .map_err(io)?;
    }
    Ok(())
}

/// `label,<prefix>0,<prefix>1,...` followed by one row per matrix row, for
/// plotting latent codes or rectified features with external tools.
pub fn write_labeled_matrix_csv<W: Write>(
    matrix: &Matrix,
    labels: &[u32],
    prefix: &str,
    w: &mut W,
) -> Result<()> {
    if labels.len() != matrix.rows() {
        return Err(Error::Shape(format!(
            "{} labels for {} rows",
            labels.len(),
            matrix.rows()
        )));
    }
    let header: Vec<String> = (0..matrix.cols()).map(|j| format!("{prefix}{j}")).collect();
    writeln!(w, "label,{}", header.join(",")).map_err(io)?;
    for (row, label) in matrix.iter_rows().zip(labels) {
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(w, "{label},{}", cells.join(",")).map_err(io)?;
    }
    Ok(())
}
