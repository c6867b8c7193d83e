//! Adam optimizer with bias-corrected moment estimates.

use crate::tensor::Tensor;

/// Hyperparameters. Defaults: lr 1e−3, β1 0.9, β2 0.999, ε 1e−8.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Per-parameter-tensor first/second moment state.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub step: u64,
    pub m: Tensor,
    pub v: Tensor,
}

/// Optimizer over an ordered list of parameter tensors.
#[derive(Debug, Clone)]
pub struct Adam {
    pub config: AdamConfig,
    states: Vec<AdamState>,
}

impl Adam {
    pub fn new(config: AdamConfig, shapes: &[Vec<usize>]) -> Adam {
        let states = shapes
            .iter()
            .map(|s| AdamState {
                step: 0,
                m: Tensor::zeros(s),
                v: Tensor::zeros(s),
            })
            .collect();
        Adam { config, states }
    }

    /// One update: m←β1m+(1−β1)g, v←β2v+(1−β2)g², then
    /// param −= lr·m̂/(√v̂+ε) with bias-corrected m̂, v̂.
    /// The step counter increments before bias correction.
    pub fn step(&mut self, params: &mut [&mut Tensor], grads: &[&Tensor]) {
        assert_eq!(params.len(), self.states.len(), "parameter count changed");
        assert_eq!(grads.len(), self.states.len(), "gradient count mismatch");
        let AdamConfig {
            learning_rate,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        for ((param, grad), state) in params.iter_mut().zip(grads).zip(&mut self.states) {
            assert_eq!(param.shape(), grad.shape(), "param/grad shape mismatch");
            state.step += 1;
            let bc1 = 1.0 - beta1.powi(state.step as i32);
            let bc2 = 1.0 - beta2.powi(state.step as i32);
            let (m, v) = (state.m.data_mut(), state.v.data_mut());
            for (i, (p, g)) in param.data_mut().iter_mut().zip(grad.data()).enumerate() {
                m[i] = beta1 * m[i] + (1.0 - beta1) * g;
                v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
                let m_hat = m[i] / bc1;
                let v_hat = v[i] / bc2;
                *p -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
            }
        }
    }

    pub fn states(&self) -> &[AdamState] {
        &self.states
    }
}
