//! Fully connected layer converting extracted features to outputs.

use crate::error::{Error, Result, ShapeError};
use crate::kernel::activation::Activation;
use crate::kernel::rng::Prng;
use crate::tensor::Tensor;

/// Dense layer: out = act(Wᵀ·x + b) with `weights` stored `[in, out]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub in_size: usize,
    pub out_size: usize,
    /// `[in_size, out_size]`
    pub weights: Tensor,
    /// `[out_size]`
    pub bias: Tensor,
    pub activation: Activation,
}

pub struct DenseGrads {
    pub input: Tensor,
    pub weights: Tensor,
    pub bias: Tensor,
}

impl DenseLayer {
    pub fn new(in_size: usize, out_size: usize, activation: Activation, rng: &mut Prng) -> Self {
        let limit = (6.0 / (in_size + out_size) as f64).sqrt();
        let mut weights = Tensor::zeros(&[in_size, out_size]);
        for w in weights.data_mut() {
            *w = rng.uniform_in(-limit, limit);
        }
        DenseLayer {
            in_size,
            out_size,
            weights,
            bias: Tensor::zeros(&[out_size]),
            activation,
        }
    }

    fn check_input(&self, input: &Tensor) -> Result<()> {
        if input.len() != self.in_size {
            return Err(Error::Shape(ShapeError::AxisMismatch {
                op: "dense_forward",
                axis: "input length",
                expected: self.in_size,
                got: input.len(),
            }));
        }
        Ok(())
    }

    pub fn forward(&self, input: &Tensor) -> Result<Tensor> {
        self.check_input(input)?;
        let x = input.data();
        let w = self.weights.data();
        let mut out = Tensor::zeros(&[self.out_size]);
        let o = out.data_mut();
        o.copy_from_slice(self.bias.data());
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let row = &w[i * self.out_size..(i + 1) * self.out_size];
            for (oj, wj) in o.iter_mut().zip(row) {
                *oj += xi * wj;
            }
        }
        for v in o.iter_mut() {
            *v = self.activation.apply(*v);
        }
        Ok(out)
    }

    pub fn backward(
        &self,
        input: &Tensor,
        output: &Tensor,
        upstream: &Tensor,
    ) -> Result<DenseGrads> {
        self.check_input(input)?;
        if upstream.len() != self.out_size {
            return Err(Error::Shape(ShapeError::AxisMismatch {
                op: "dense_backward",
                axis: "upstream length",
                expected: self.out_size,
                got: upstream.len(),
            }));
        }
        let x = input.data();
        let w = self.weights.data();
        let dz: Vec<f64> = upstream
            .data()
            .iter()
            .zip(output.data())
            .map(|(u, y)| u * self.activation.derivative_from_output(*y))
            .collect();

        let mut grad_in = Tensor::zeros(&[self.in_size]);
        let mut grad_w = Tensor::zeros(&[self.in_size, self.out_size]);
        let grad_b = Tensor::from_vec(&[self.out_size], dz.clone()).expect("shape");
        let gi = grad_in.data_mut();
        let gw = grad_w.data_mut();
        for i in 0..self.in_size {
            let row = &w[i * self.out_size..(i + 1) * self.out_size];
            let grow = &mut gw[i * self.out_size..(i + 1) * self.out_size];
            let mut acc = 0.0;
            for j in 0..self.out_size {
                acc += row[j] * dz[j];
                grow[j] = x[i] * dz[j];
            }
            gi[i] = acc;
        }
        Ok(DenseGrads {
            input: grad_in,
            weights: grad_w,
            bias: grad_b,
        })
    }
}
