use serde::{Deserialize, Serialize};

use super::{GradVector, ParamVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { learning_rate: 1e-2, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

/// Moment estimates and step counter of one Adam run.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
    pub config: AdamConfig,
}

impl AdamState {
    pub fn new(n: usize, config: AdamConfig) -> Self {
        Self { m: vec![0.0; n], v: vec![0.0; n], step: 0, config }
    }

    /// In-place bias-corrected update.
    pub fn update(&mut self, params: &mut ParamVector, grad: &GradVector) -> Result<()> {
        let n = self.m.len();
        for got in [params.len(), grad.len()] {
            if got != n {
                return Err(Error::ShapeMismatch { expected: n, got });
            }
        }
        let AdamConfig { learning_rate, beta1, beta2, eps } = self.config;
        self.step += 1;
        let bc1 = 1.0 - beta1.powi(self.step as i32);
        let bc2 = 1.0 - beta2.powi(self.step as i32);
        for i in 0..n {
            let g = grad.0[i];
            self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * g;
            self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params.0[i] -= learning_rate * m_hat / (v_hat.sqrt() + eps);
        }
        Ok(())
    }
}

/// Functional form of [`AdamState::update`].
pub fn adam_step(state: AdamState, params: ParamVector, grad: &GradVector) -> Result<(AdamState, ParamVector)> {
    let (mut state, mut params) = (state, params);
    state.update(&mut params, grad)?;
    Ok((state, params))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut s = AdamState::new(3, AdamConfig::default());
        s.m = vec![0.5, -0.2, 0.1];
        s.v = vec![0.1, 0.1, 0.1];
        s.step = 4;
        let p = ParamVector(vec![1.0, 2.0, 3.0]);
        let (s2, p2) = adam_step(s.clone(), p.clone(), &GradVector::zeros(3)).unwrap();
        // moments decay, parameters still move by the remembered momentum
        assert!(s2.m.iter().zip(&s.m).all(|(a, b)| a.abs() < b.abs()));
        assert_eq!(s2.step, 5);

        let fresh = AdamState::new(3, AdamConfig::default());
        let (_, p3) = adam_step(fresh, p.clone(), &GradVector::zeros(3)).unwrap();
        assert_eq!(p3, p);
        assert_ne!(p2, p);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        let cfg = AdamConfig { learning_rate: 0.01, ..Default::default() };
        let (_, p) = adam_step(AdamState::new(2, cfg), ParamVector(vec![0.0, 0.0]), &GradVector(vec![1.0, -1.0])).unwrap();
        // m_hat = g, v_hat = g^2 -> step = lr * 1/(1+eps)
        let expected = 0.01 / (1.0 + 1e-8);
        assert!((p.0[0] + expected).abs() < 1e-15);
        assert!((p.0[1] - expected).abs() < 1e-15);
    }

    #[test]
    fn repeated_gradient_does_not_grow_the_step() {
        let cfg = AdamConfig::default();
        let g = GradVector(vec![0.7]);
        let (s, p1) = adam_step(AdamState::new(1, cfg), ParamVector(vec![0.0]), &g).unwrap();
        let first = p1.0[0].abs();
        let (_, p2) = adam_step(s, p1.clone(), &g).unwrap();
        let second = (p2.0[0] - p1.0[0]).abs();
        assert!(second <= first * (1.0 + 1e-8));
    }

    #[test]
    fn shape_mismatch() {
        let err = adam_step(AdamState::new(2, AdamConfig::default()), ParamVector(vec![0.0]), &GradVector::zeros(2));
        assert!(matches!(err, Err(Error::ShapeMismatch { expected: 2, got: 1 })));
    }
}
