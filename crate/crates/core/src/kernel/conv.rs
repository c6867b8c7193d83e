//! Valid-mode 2-D convolution over [height, width, channels] tensors.
//!
//! Every filter shares one weight set across all spatial positions; stride
//! is fixed at 1 and there is no padding, so output height/width shrink by
//! filter size minus one.

use crate::error::{Error, Result, ShapeError};
use crate::kernel::activation::Activation;
use crate::kernel::rng::Prng;
use crate::tensor::Tensor;

/// Convolutional layer with `out_channels` filters of shape
/// `filter_h × filter_w × in_channels`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvLayer {
    pub filter_h: usize,
    pub filter_w: usize,
    pub in_channels: usize,
    pub out_channels: usize,
    /// `[out_channels, filter_h, filter_w, in_channels]`
    pub weights: Tensor,
    /// `[out_channels]`
    pub bias: Tensor,
    pub activation: Activation,
}

/// Gradients produced by the backward pass.
pub struct ConvGrads {
    pub input: Tensor,
    pub weights: Tensor,
    pub bias: Tensor,
}

impl ConvLayer {
    /// Glorot-uniform initialized layer; biases zero.
    pub fn new(
        filter_h: usize,
        filter_w: usize,
        in_channels: usize,
        out_channels: usize,
        activation: Activation,
        rng: &mut Prng,
    ) -> ConvLayer {
        let fan_in = (filter_h * filter_w * in_channels) as f64;
        let fan_out = (filter_h * filter_w * out_channels) as f64;
        let limit = (6.0 / (fan_in + fan_out)).sqrt();
        let mut weights = Tensor::zeros(&[out_channels, filter_h, filter_w, in_channels]);
        for w in weights.data_mut() {
            *w = rng.uniform_in(-limit, limit);
        }
        ConvLayer {
            filter_h,
            filter_w,
            in_channels,
            out_channels,
            weights,
            bias: Tensor::zeros(&[out_channels]),
            activation,
        }
    }

    pub fn output_shape(&self, input_shape: &[usize]) -> Result<[usize; 3]> {
        if input_shape.len() != 3 {
            return Err(Error::Shape(ShapeError::RankMismatch {
                op: "conv_forward",
                expected: 3,
                got: input_shape.len(),
            }));
        }
        let (h, w, c) = (input_shape[0], input_shape[1], input_shape[2]);
        if c != self.in_channels {
            return Err(Error::Shape(ShapeError::AxisMismatch {
                op: "conv_forward",
                axis: "channels",
                expected: self.in_channels,
                got: c,
            }));
        }
        if h < self.filter_h {
            return Err(Error::Shape(ShapeError::TooSmall {
                op: "conv_forward",
                axis: "height",
                need: self.filter_h,
                got: h,
            }));
        }
        if w < self.filter_w {
            return Err(Error::Shape(ShapeError::TooSmall {
                op: "conv_forward",
                axis: "width",
                need: self.filter_w,
                got: w,
            }));
        }
        Ok([h - self.filter_h + 1, w - self.filter_w + 1, self.out_channels])
    }

    /// out[i,j,k] = act( bias[k] + Σ_{a,b,c} w[k,a,b,c] · in[i+a, j+b, c] )
    pub fn forward(&self, input: &Tensor) -> Result<Tensor> {
        let [out_h, out_w, k_n] = self.output_shape(input.shape())?;
        let (in_w, in_c) = (input.shape()[1], input.shape()[2]);
        let x = input.data();
        let w = self.weights.data();
        let b = self.bias.data();
        let filter_len = self.filter_h * self.filter_w * self.in_channels;

        let mut out = Tensor::zeros(&[out_h, out_w, k_n]);
        let o = out.data_mut();
        for i in 0..out_h {
            for j in 0..out_w {
                let out_base = (i * out_w + j) * k_n;
                for k in 0..k_n {
                    let wf = &w[k * filter_len..(k + 1) * filter_len];
                    let mut acc = b[k];
                    let mut widx = 0;
                    for a in 0..self.filter_h {
                        let row = ((i + a) * in_w + j) * in_c;
                        let span = self.filter_w * in_c;
                        let xs = &x[row..row + span];
                        for (xv, wv) in xs.iter().zip(&wf[widx..widx + span]) {
                            acc += xv * wv;
                        }
                        widx += span;
                    }
                    o[out_base + k] = self.activation.apply(acc);
                }
            }
        }
        Ok(out)
    }

    /// Exact analytic gradients of the forward map, including the
    /// activation derivative. `output` must be the tensor produced by
    /// [`ConvLayer::forward`] on `input`.
    pub fn backward(
        &self,
        input: &Tensor,
        output: &Tensor,
        upstream: &Tensor,
    ) -> Result<ConvGrads> {
        let expect = self.output_shape(input.shape())?;
        if upstream.shape() != expect {
            return Err(Error::Shape(ShapeError::AxisMismatch {
                op: "conv_backward",
                axis: "upstream",
                expected: expect.iter().product(),
                got: upstream.len(),
            }));
        }
        let [out_h, out_w, k_n] = expect;
        let (in_w, in_c) = (input.shape()[1], input.shape()[2]);
        let x = input.data();
        let w = self.weights.data();
        let y = output.data();
        let up = upstream.data();
        let filter_len = self.filter_h * self.filter_w * self.in_channels;

        let mut grad_in = Tensor::zeros(input.shape());
        let mut grad_w = Tensor::zeros(self.weights.shape());
        let mut grad_b = Tensor::zeros(self.bias.shape());
        let gi = grad_in.data_mut();
        let gw = grad_w.data_mut();
        let gb = grad_b.data_mut();

        for i in 0..out_h {
            for j in 0..out_w {
                let out_base = (i * out_w + j) * k_n;
                for k in 0..k_n {
                    let dz = up[out_base + k]
                        * self.activation.derivative_from_output(y[out_base + k]);
                    if dz == 0.0 {
                        continue;
                    }
                    gb[k] += dz;
                    let wf = &w[k * filter_len..(k + 1) * filter_len];
                    let gwf = &mut gw[k * filter_len..(k + 1) * filter_len];
                    let mut widx = 0;
                    for a in 0..self.filter_h {
                        let row = ((i + a) * in_w + j) * in_c;
                        let span = self.filter_w * in_c;
                        for t in 0..span {
                            gwf[widx + t] += dz * x[row + t];
                            gi[row + t] += dz * wf[widx + t];
                        }
                        widx += span;
                    }
                }
            }
        }
        Ok(ConvGrads {
            input: grad_in,
            weights: grad_w,
            bias: grad_b,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Straightforward five-nested-loop reference, kept independent of the
    /// implementation's windowed slicing.
    pub(crate) fn conv_oracle(input: &Tensor, layer: &ConvLayer) -> Tensor {
        let (h, w, c) = (input.shape()[0], input.shape()[1], input.shape()[2]);
        let (fh, fw, k_n) = (layer.filter_h, layer.filter_w, layer.out_channels);
        let (oh, ow) = (h - fh + 1, w - fw + 1);
        let mut out = Tensor::zeros(&[oh, ow, k_n]);
        for i in 0..oh {
            for j in 0..ow {
                for k in 0..k_n {
                    let mut acc = layer.bias.data()[k];
                    for a in 0..fh {
                        for b in 0..fw {
                            for ch in 0..c {
                                let wi = ((k * fh + a) * fw + b) * c + ch;
                                acc += layer.weights.data()[wi]
                                    * input.data()[input.idx3(i + a, j + b, ch)];
                            }
                        }
                    }
                    let oi = out.idx3(i, j, k);
                    out.data_mut()[oi] = layer.activation.apply(acc);
                }
            }
        }
        out
    }

    fn random_layer(
        fh: usize,
        fw: usize,
        cin: usize,
        k: usize,
        act: Activation,
        rng: &mut Prng,
    ) -> ConvLayer {
        let mut layer = ConvLayer::new(fh, fw, cin, k, act, rng);
        for w in layer.weights.data_mut() {
            *w = rng.uniform_in(-1.0, 1.0);
        }
        for b in layer.bias.data_mut() {
            *b = rng.uniform_in(-0.5, 0.5);
        }
        layer
    }

    fn random_input(h: usize, w: usize, c: usize, rng: &mut Prng) -> Tensor {
        let mut t = Tensor::zeros(&[h, w, c]);
        for v in t.data_mut() {
            *v = rng.uniform_in(-2.0, 2.0);
        }
        t
    }

    #[test]
    fn hand_worked_row_filter() {
        // 2×2×1 input, one 1×2 filter [1,1], bias 0, identity.
        let input = Tensor::from_vec(&[2, 2, 1], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let mut rng = Prng::new(0);
        let mut layer = ConvLayer::new(1, 2, 1, 1, Activation::Identity, &mut rng);
        layer.weights.data_mut().copy_from_slice(&[1.0, 1.0]);
        let out = layer.forward(&input).unwrap();
        assert_eq!(out.shape(), &[2, 1, 1]);
        assert_eq!(out.data(), &[3.0, 7.0]);
    }

    #[test]
    fn one_by_one_identity_filter_passes_input_through() {
        let mut rng = Prng::new(1);
        let input = random_input(5, 4, 1, &mut rng);
        let mut layer = ConvLayer::new(1, 1, 1, 1, Activation::Identity, &mut rng);
        layer.weights.data_mut()[0] = 1.0;
        let out = layer.forward(&input).unwrap();
        assert_eq!(out.data(), input.data());

        // gradInput == upstreamGrad for the same layer.
        let mut up = Tensor::zeros(out.shape());
        for v in up.data_mut() {
            *v = rng.uniform_in(-1.0, 1.0);
        }
        let grads = layer.backward(&input, &out, &up).unwrap();
        assert_eq!(grads.input.data(), up.data());
    }

    #[test]
    fn paper_scale_shape() {
        // 60×82×1 input through eight 1×82 filters → 60×1×8.
        let mut rng = Prng::new(2);
        let input = random_input(60, 82, 1, &mut rng);
        let layer = ConvLayer::new(1, 82, 1, 8, Activation::Relu, &mut rng);
        let out = layer.forward(&input).unwrap();
        assert_eq!(out.shape(), &[60, 1, 8]);
    }

    #[test]
    fn matches_nested_loop_oracle() {
        let mut rng = Prng::new(3);
        for _ in 0..30 {
            let fh = 1 + rng.index(3);
            let fw = 1 + rng.index(3);
            let c = 1 + rng.index(3);
            let k = 1 + rng.index(4);
            let h = fh + rng.index(6);
            let w = fw + rng.index(6);
            let layer = random_layer(fh, fw, c, k, Activation::Identity, &mut rng);
            let input = random_input(h, w, c, &mut rng);
            let ours = layer.forward(&input).unwrap();
            let reference = conv_oracle(&input, &layer);
            for (a, b) in ours.data().iter().zip(reference.data()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_upstream_gives_zero_gradients() {
        let mut rng = Prng::new(4);
        let input = random_input(6, 4, 2, &mut rng);
        let layer = random_layer(3, 1, 2, 2, Activation::Relu, &mut rng);
        let out = layer.forward(&input).unwrap();
        let up = Tensor::zeros(out.shape());
        let grads = layer.backward(&input, &out, &up).unwrap();
        assert!(grads.input.data().iter().all(|&g| g == 0.0));
        assert!(grads.weights.data().iter().all(|&g| g == 0.0));
        assert!(grads.bias.data().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn shape_errors_name_the_axis() {
        let mut rng = Prng::new(5);
        let layer = ConvLayer::new(3, 1, 2, 2, Activation::Relu, &mut rng);
        let input = random_input(6, 4, 1, &mut rng);
        let err = layer.forward(&input).unwrap_err().to_string();
        assert!(err.contains("channels"), "{err}");
        let small = random_input(2, 4, 2, &mut rng);
        let err = layer.forward(&small).unwrap_err().to_string();
        assert!(err.contains("height"), "{err}");
    }
}
