use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Bias-corrected Adam over a fixed list of flat parameter buffers.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    config: AdamConfig,
    first_moment: Vec<Vec<f64>>,
    second_moment: Vec<Vec<f64>>,
    step: u64,
}

impl AdamState {
    /// Fresh state for parameter buffers with the given lengths.
    pub fn new(config: AdamConfig, lengths: &[usize]) -> Self {
        Self {
            config,
            first_moment: lengths.iter().map(|&n| vec![0.0; n]).collect(),
            second_moment: lengths.iter().map(|&n| vec![0.0; n]).collect(),
            step: 0,
        }
    }

    pub fn config(&self) -> &AdamConfig {
        &self.config
    }

    pub fn steps(&self) -> u64 {
        self.step
    }

    pub fn step(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]]) -> Result<()> {
        if params.len() != self.first_moment.len() || grads.len() != params.len() {
            return Err(Error::Shape(format!(
                "adam: {} parameter buffers and {} gradients for state tracking {}",
                params.len(),
                grads.len(),
                self.first_moment.len()
            )));
        }
        for (i, (p, g)) in params.iter().zip(grads).enumerate() {
            if p.len() != self.first_moment[i].len() || g.len() != p.len() {
                return Err(Error::Shape(format!(
                    "adam: buffer {i} has {} parameters and {} gradients, state expects {}",
                    p.len(),
                    g.len(),
                    self.first_moment[i].len()
                )));
            }
        }

        self.step += 1;
        let AdamConfig {
            learning_rate,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        let t = self.step as i32;
        let bias1 = 1.0 - beta1.powi(t);
        let bias2 = 1.0 - beta2.powi(t);

        for ((p, g), (m, v)) in params.iter_mut().zip(grads).zip(
            self.first_moment
                .iter_mut()
                .zip(self.second_moment.iter_mut()),
        ) {
            for j in 0..p.len() {
                let gj = g[j];
                m[j] = beta1 * m[j] + (1.0 - beta1) * gj;
                v[j] = beta2 * v[j] + (1.0 - beta2) * gj * gj;
                let m_hat = m[j] / bias1;
                let v_hat = v[j] / bias2;
                p[j] -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut p = vec![1.0, -2.0, 3.5];
        let before = p.clone();
        let mut state = AdamState::new(AdamConfig::default(), &[3]);
        for _ in 0..10 {
            state.step(&mut [&mut p], &[&[0.0; 3]]).unwrap();
        }
        assert_eq!(p, before);
        assert_eq!(state.steps(), 10);
    }

    #[test]
    fn first_step_matches_hand_computation() {
        // m̂ = g and v̂ = g² after one step, so Δ = lr·g / (|g| + ε)
        let cfg = AdamConfig {
            learning_rate: 0.01,
            ..AdamConfig::default()
        };
        for g in [0.3, -2.0, 1e-3] {
            let mut p = vec![1.0];
            let mut state = AdamState::new(cfg, &[1]);
            state.step(&mut [&mut p], &[&[g]]).unwrap();
            let expected = 1.0 - 0.01 * g / (g.abs() + 1e-8);
            assert!((p[0] - expected).abs() < 1e-15);
            assert!(((1.0 - p[0]).abs() - 0.01).abs() < 1e-7);
        }
    }

    #[test]
    fn second_step_matches_hand_computation() {
        let cfg = AdamConfig {
            learning_rate: 0.1,
            ..AdamConfig::default()
        };
        let mut p = vec![0.0];
        let mut state = AdamState::new(cfg, &[1]);
        state.step(&mut [&mut p], &[&[1.0]]).unwrap();
        state.step(&mut [&mut p], &[&[-1.0]]).unwrap();
        // m = 0.9·0.1 − 0.1 = −0.01, v = 0.999·0.001 + 0.001 = 0.001999
        let m_hat = -0.01 / (1.0 - 0.81);
        let v_hat = 0.001999 / (1.0 - 0.998001);
        let first = -0.1 / (1.0 + 1e-8);
        let expected = first - 0.1 * m_hat / (f64::sqrt(v_hat) + 1e-8);
        assert!((p[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn deterministic_across_runs() {
        let run = || {
            let mut p = vec![0.5; 4];
            let mut state = AdamState::new(AdamConfig::default(), &[4]);
            for k in 0..100 {
                let g: Vec<f64> = p.iter().map(|x| x * 2.0 + k as f64 * 1e-3).collect();
                state.step(&mut [&mut p], &[&g]).unwrap();
            }
            p
        };
        let a = run();
        let b = run();
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn shape_mismatch() {
        let mut p = vec![0.0; 2];
        let mut state = AdamState::new(AdamConfig::default(), &[2]);
        assert!(state.step(&mut [&mut p], &[&[0.0; 3]]).is_err());
        assert!(state.step(&mut [], &[]).is_err());
        assert_eq!(state.steps(), 0);
    }
}
