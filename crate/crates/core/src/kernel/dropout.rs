//! Inverted dropout: units are zeroed at training time with probability
//! `rate` and survivors are scaled by 1/(1−rate), so inference is the
//! identity map.

use crate::kernel::rng::Prng;
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DropoutLayer {
    pub rate: f64,
}

impl DropoutLayer {
    pub fn new(rate: f64) -> DropoutLayer {
        assert!((0.0..1.0).contains(&rate), "dropout rate must be in [0,1)");
        DropoutLayer { rate }
    }

    /// Training-mode forward; returns the output and the survivor mask.
    pub fn forward_train(&self, input: &Tensor, rng: &mut Prng) -> (Tensor, Vec<bool>) {
        if self.rate == 0.0 {
            return (input.clone(), vec![true; input.len()]);
        }
        let scale = 1.0 / (1.0 - self.rate);
        let mut out = input.clone();
        let mut mask = vec![false; input.len()];
        for (v, m) in out.data_mut().iter_mut().zip(mask.iter_mut()) {
            if rng.uniform() < self.rate {
                *v = 0.0;
            } else {
                *v *= scale;
                *m = true;
            }
        }
        (out, mask)
    }

    /// Inference is the identity.
    pub fn forward_eval(&self, input: &Tensor) -> Tensor {
        input.clone()
    }

    pub fn backward(&self, mask: &[bool], upstream: &Tensor) -> Tensor {
        let scale = 1.0 / (1.0 - self.rate);
        let mut grad = upstream.clone();
        for (g, m) in grad.data_mut().iter_mut().zip(mask) {
            *g = if *m { *g * scale } else { 0.0 };
        }
        grad
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inference_is_identity() {
        let mut rng = Prng::new(0);
        let mut input = Tensor::zeros(&[100]);
        for v in input.data_mut() {
            *v = rng.uniform_in(-1.0, 1.0);
        }
        let layer = DropoutLayer::new(0.3);
        assert_eq!(layer.forward_eval(&input).data(), input.data());
    }

    #[test]
    fn zero_rate_is_identity_in_training() {
        let mut rng = Prng::new(1);
        let mut input = Tensor::zeros(&[64]);
        for v in input.data_mut() {
            *v = rng.uniform_in(-1.0, 1.0);
        }
        let layer = DropoutLayer::new(0.0);
        let (out, mask) = layer.forward_train(&input, &mut rng);
        assert_eq!(out.data(), input.data());
        assert!(mask.iter().all(|&m| m));
    }

    #[test]
    fn survivor_fraction_close_to_keep_probability() {
        let mut rng = Prng::new(2);
        let input = Tensor::from_vec(&[1_000_000], vec![1.0; 1_000_000]).unwrap();
        let layer = DropoutLayer::new(0.1);
        let (_, mask) = layer.forward_train(&input, &mut rng);
        let surviving = mask.iter().filter(|&&m| m).count() as f64 / 1e6;
        assert!((surviving - 0.9).abs() < 0.002, "fraction = {surviving}");
    }

    #[test]
    fn survivors_scaled_by_inverse_keep_probability() {
        let mut rng = Prng::new(3);
        let input = Tensor::from_vec(&[1000], vec![2.0; 1000]).unwrap();
        let layer = DropoutLayer::new(0.25);
        let (out, mask) = layer.forward_train(&input, &mut rng);
        for (v, m) in out.data().iter().zip(&mask) {
            if *m {
                assert!((v - 2.0 / 0.75).abs() < 1e-12);
            } else {
                assert_eq!(*v, 0.0);
            }
        }
    }
}
