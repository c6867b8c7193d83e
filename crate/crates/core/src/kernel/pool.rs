//! 2×1 max pooling with stride 2 along the height axis.
//!
//! Windows never overlap; a trailing odd row is discarded, which is what
//! takes 27 rows to 13 in the default architectures. Ties inside a window
//! break toward the lower index so backward routing is deterministic.

use crate::error::{Error, Result, ShapeError};
use crate::tensor::Tensor;

/// Fixed-geometry max-pool layer (2×1 window, 2×1 stride).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoolLayer;

/// Forward output plus the flat input index of each window maximum,
/// needed to route gradients back.
#[derive(Debug)]
pub struct PoolForward {
    pub output: Tensor,
    pub argmax: Vec<usize>,
    pub input_shape: Vec<usize>,
}

impl PoolLayer {
    pub fn output_shape(&self, input_shape: &[usize]) -> Result<[usize; 3]> {
        if input_shape.len() != 3 {
            return Err(Error::Shape(ShapeError::RankMismatch {
                op: "max_pool",
                expected: 3,
                got: input_shape.len(),
            }));
        }
        if input_shape[0] < 2 {
            return Err(Error::Shape(ShapeError::TooSmall {
                op: "max_pool",
                axis: "height",
                need: 2,
                got: input_shape[0],
            }));
        }
        Ok([input_shape[0] / 2, input_shape[1], input_shape[2]])
    }

    pub fn forward(&self, input: &Tensor) -> Result<PoolForward> {
        let [out_h, w, c] = self.output_shape(input.shape())?;
        let x = input.data();
        let row = w * c;
        let mut output = Tensor::zeros(&[out_h, w, c]);
        let mut argmax = vec![0usize; out_h * row];
        let o = output.data_mut();
        for i in 0..out_h {
            let top = 2 * i * row;
            let bottom = top + row;
            for t in 0..row {
                // Tie (equal values) keeps the lower row index.
                if x[bottom + t] > x[top + t] {
                    o[i * row + t] = x[bottom + t];
                    argmax[i * row + t] = bottom + t;
                } else {
                    o[i * row + t] = x[top + t];
                    argmax[i * row + t] = top + t;
                }
            }
        }
        Ok(PoolForward {
            output,
            argmax,
            input_shape: input.shape().to_vec(),
        })
    }

    /// Routes each upstream gradient to its argmax position; all other
    /// positions (including any discarded trailing row) get zero.
    pub fn backward(&self, fwd: &PoolForward, upstream: &Tensor) -> Result<Tensor> {
        if upstream.len() != fwd.argmax.len() {
            return Err(Error::Shape(ShapeError::AxisMismatch {
                op: "max_pool_backward",
                axis: "upstream",
                expected: fwd.argmax.len(),
                got: upstream.len(),
            }));
        }
        let mut grad_in = Tensor::zeros(&fwd.input_shape);
        let gi = grad_in.data_mut();
        for (pos, g) in fwd.argmax.iter().zip(upstream.data()) {
            gi[*pos] += g;
        }
        Ok(grad_in)
    }
}
