use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{leaky_relu_grad, matmul, Matrix, Rng, DEFAULT_LEAKY_SLOPE};

/// Layer sizes and activation placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Architecture {
    pub hidden_dim: usize,
    pub leaky_slope: f64,
    /// LeakyReLU after the encoder's hidden layer.
    pub encoder_activation: bool,
    /// LeakyReLU on the decoder output.
    pub decoder_activation: bool,
}

impl Default for Architecture {
    fn default() -> Self {
        Self {
            hidden_dim: 2048,
            leaky_slope: DEFAULT_LEAKY_SLOPE,
            encoder_activation: true,
            decoder_activation: true,
        }
    }
}

impl Architecture {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_dim == 0 {
            return Err(Error::InvalidArgument("hidden_dim must be positive".into()));
        }
        if !(self.leaky_slope >= 0.0 && self.leaky_slope.is_finite()) {
            return Err(Error::InvalidArgument(
                "leaky_slope must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Encoder/decoder weights. Weight matrices are stored input-major, so a layer
/// computes `Wᵀx + b` as the row vector `x·W + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CcfModel {
    pub(crate) arch: Architecture,
    pub(crate) w1: Matrix,
    pub(crate) b1: Vec<f64>,
    pub(crate) w2: Matrix,
    pub(crate) b2: Vec<f64>,
    pub(crate) w3: Matrix,
    pub(crate) b3: Vec<f64>,
}

/// Intermediate activations of a batch forward pass, kept for backprop.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub hidden_pre: Matrix,
    pub hidden: Matrix,
    pub latent: Matrix,
    pub output_pre: Matrix,
    pub output: Matrix,
}

fn glorot(rng: &mut Rng, fan_in: usize, fan_out: usize) -> Matrix {
    let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
    let data = (0..fan_in * fan_out)
        .map(|_| rng.uniform(-bound, bound))
        .collect();
    Matrix::new(fan_in, fan_out, data).expect("sizes agree")
}

impl CcfModel {
    /// Uniform Glorot initialization with zero biases.
    pub fn new(feature_dim: usize, n_base: usize, arch: Architecture, seed: u64) -> Result<Self> {
        arch.validate()?;
        if feature_dim == 0 || n_base == 0 {
            return Err(Error::InvalidArgument(
                "feature_dim and the number of base classes must be positive".into(),
            ));
        }
        let mut rng = Rng::new(seed);
        let h = arch.hidden_dim;
        Ok(Self {
            arch,
            w1: glorot(&mut rng, feature_dim, h),
            b1: vec![0.0; h],
            w2: glorot(&mut rng, h, n_base),
            b2: vec![0.0; n_base],
            w3: glorot(&mut rng, n_base, feature_dim),
            b3: vec![0.0; feature_dim],
        })
    }

    /// Builds a model from explicit parameters, checking every shape.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        arch: Architecture,
        w1: Matrix,
        b1: Vec<f64>,
        w2: Matrix,
        b2: Vec<f64>,
        w3: Matrix,
        b3: Vec<f64>,
    ) -> Result<Self> {
        arch.validate()?;
        let (d, h, c) = (w1.rows(), w1.cols(), w2.cols());
        let ok = h == arch.hidden_dim
            && b1.len() == h
            && w2.rows() == h
            && b2.len() == c
            && w3.rows() == c
            && w3.cols() == d
            && b3.len() == d;
        if !ok {
            return Err(Error::Shape(format!(
                "inconsistent parameter shapes: W1 {}x{}, b1 {}, W2 {}x{}, b2 {}, W3 {}x{}, b3 {} (hidden_dim {})",
                w1.rows(), w1.cols(), b1.len(), w2.rows(), w2.cols(), b2.len(),
                w3.rows(), w3.cols(), b3.len(), arch.hidden_dim
            )));
        }
        let model = Self {
            arch,
            w1,
            b1,
            w2,
            b2,
            w3,
            b3,
        };
        if !model.is_finite() {
            return Err(Error::Data("model parameters are not finite".into()));
        }
        Ok(model)
    }

    pub fn architecture(&self) -> &Architecture {
        &self.arch
    }

    pub fn feature_dim(&self) -> usize {
        self.w1.rows()
    }

    pub fn hidden_dim(&self) -> usize {
        self.w1.cols()
    }

    /// Size of `z`, equal to the number of base classes.
    pub fn latent_dim(&self) -> usize {
        self.w2.cols()
    }

    /// Parameter buffers in the fixed order W1, b1, W2, b2, W3, b3.
    pub fn buffers(&self) -> [&[f64]; 6] {
        [
            self.w1.data(),
            &self.b1,
            self.w2.data(),
            &self.b2,
            self.w3.data(),
            &self.b3,
        ]
    }

    pub fn buffers_mut(&mut self) -> [&mut [f64]; 6] {
        [
            self.w1.data_mut(),
            &mut self.b1,
            self.w2.data_mut(),
            &mut self.b2,
            self.w3.data_mut(),
            &mut self.b3,
        ]
    }

    pub fn n_parameters(&self) -> usize {
        self.buffers().iter().map(|b| b.len()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.buffers()
            .iter()
            .all(|b| b.iter().all(|v| v.is_finite()))
    }

    fn act(&self, enabled: bool, v: f64) -> f64 {
        if enabled && v < 0.0 {
            self.arch.leaky_slope * v
        } else {
            v
        }
    }

    pub(crate) fn act_grad(&self, enabled: bool, pre: f64) -> f64 {
        if enabled {
            leaky_relu_grad(pre, self.arch.leaky_slope)
        } else {
            1.0
        }
    }

    /// Latent logits `z = f(x)`.
    pub fn encode(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.feature_dim() {
            return Err(Error::Shape(format!(
                "encode: input has {} entries, model expects {}",
                x.len(),
                self.feature_dim()
            )));
        }
        let mut hidden = self.w1.tr_matvec(x)?;
        for (a, b) in hidden.iter_mut().zip(&self.b1) {
            *a = self.act(self.arch.encoder_activation, *a + b);
        }
        let mut z = self.w2.tr_matvec(&hidden)?;
        for (zi, b) in z.iter_mut().zip(&self.b2) {
            *zi += b;
        }
        Ok(z)
    }

    /// Reconstruction `x̂ = g(z)`.
    pub fn decode(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.latent_dim() {
            return Err(Error::Shape(format!(
                "decode: latent has {} entries, model expects {}",
                z.len(),
                self.latent_dim()
            )));
        }
        let mut out = self.w3.tr_matvec(z)?;
        for (o, b) in out.iter_mut().zip(&self.b3) {
            *o = self.act(self.arch.decoder_activation, *o + b);
        }
        Ok(out)
    }

    /// One rectified feature `g(f(x))` per input.
    pub fn rectify(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.decode(&self.encode(x)?)
    }

    /// Batch forward pass over the rows of `x`.
    pub fn forward(&self, x: &Matrix) -> Result<ForwardCache> {
        if x.cols() != self.feature_dim() {
            return Err(Error::Shape(format!(
                "forward: batch has {} columns, model expects {}",
                x.cols(),
                self.feature_dim()
            )));
        }
        let mut hidden_pre = matmul(x, &self.w1)?;
        hidden_pre.add_row(&self.b1)?;
        let mut hidden = hidden_pre.clone();
        for v in hidden.data_mut() {
            *v = self.act(self.arch.encoder_activation, *v);
        }
        let mut latent = matmul(&hidden, &self.w2)?;
        latent.add_row(&self.b2)?;
        let mut output_pre = matmul(&latent, &self.w3)?;
        output_pre.add_row(&self.b3)?;
        let mut output = output_pre.clone();
        for v in output.data_mut() {
            *v = self.act(self.arch.decoder_activation, *v);
        }
        Ok(ForwardCache {
            hidden_pre,
            hidden,
            latent,
            output_pre,
            output,
        })
    }

    /// Latent logits for every row of `x`.
    pub fn encode_batch(&self, x: &Matrix) -> Result<Matrix> {
        Ok(self.forward(x)?.latent)
    }

    /// Rectified features for every row of `x`.
    pub fn rectify_batch(&self, x: &Matrix) -> Result<Matrix> {
        Ok(self.forward(x)?.output)
    }
}
