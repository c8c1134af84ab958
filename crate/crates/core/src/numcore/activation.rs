use crate::error::{Error, Result};

/// Negative-side slope used when none is configured.
pub const DEFAULT_LEAKY_SLOPE: f64 = 0.01;

/// Softmax of `z / temperature`, shifted by the maximum before exponentiation.
pub fn softmax_t(z: &[f64], temperature: f64) -> Result<Vec<f64>> {
    if temperature <= 0.0 || !temperature.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "softmax temperature must be positive and finite, got {temperature}"
        )));
    }
    if let Some(i) = z.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "softmax input entry {i} is {}",
            z[i]
        )));
    }
    if z.is_empty() {
        return Ok(Vec::new());
    }
    let scaled: Vec<f64> = z.iter().map(|&v| v / temperature).collect();
    let max = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = scaled.iter().map(|&s| (s - max).exp()).collect();
    let sum: f64 = out.iter().sum();
    for p in &mut out {
        *p /= sum;
    }
    Ok(out)
}

/// Entrywise `max(x, slope·x)` for `slope` in `[0, 1]`; for `slope > 1` the
/// negative branch is still `slope·x`.
pub fn leaky_relu(v: &[f64], slope: f64) -> Vec<f64> {
    v.iter()
        .map(|&x| if x >= 0.0 { x } else { slope * x })
        .collect()
}

/// Derivative of [`leaky_relu`] at `x`, taking 1 at the kink.
#[inline]
pub fn leaky_relu_grad(x: f64, slope: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        slope
    }
}
