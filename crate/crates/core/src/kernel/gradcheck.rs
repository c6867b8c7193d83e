//! Central finite-difference verification of every layer backward pass.
//!
//! Each case builds a random layer and input, takes the analytic gradient
//! of a random linear functional of the output, and compares it against
//! (f(x+h) − f(x−h)) / 2h coordinate by coordinate. Configurations whose
//! ReLU preactivations or pooling windows sit within a small margin of a
//! kink are resampled, since no subgradient convention can match a finite
//! difference straddling one.

use crate::kernel::activation::Activation;
use crate::kernel::conv::ConvLayer;
use crate::kernel::dense::DenseLayer;
use crate::kernel::dropout::DropoutLayer;
use crate::kernel::loss;
use crate::kernel::pool::PoolLayer;
use crate::kernel::rng::Prng;
use crate::tensor::Tensor;

pub const FD_STEP: f64 = 1e-5;
pub const MAX_REL_ERR: f64 = 1e-4;
/// Preactivations/pool gaps closer to a kink than this are resampled.
const KINK_MARGIN: f64 = 1e-4;
/// Gradients below this magnitude are compared with an absolute floor.
const DENOM_FLOOR: f64 = 1e-3;

/// Outcome of a verification run.
#[derive(Debug, Clone)]
pub struct GradCheckOutcome {
    pub cases: usize,
    pub coordinates: usize,
    pub max_rel_err: f64,
    pub failures: Vec<String>,
}

impl GradCheckOutcome {
    pub fn new() -> Self {
        GradCheckOutcome {
            cases: 0,
            coordinates: 0,
            max_rel_err: 0.0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.max_rel_err < MAX_REL_ERR
    }

    pub fn merge(&mut self, other: &GradCheckOutcome) {
        self.cases += other.cases;
        self.coordinates += other.coordinates;
        self.max_rel_err = self.max_rel_err.max(other.max_rel_err);
        self.failures.extend(other.failures.iter().cloned());
    }

    fn record(&mut self, context: &str, analytic: f64, numeric: f64) {
        self.coordinates += 1;
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(DENOM_FLOOR);
        if rel > self.max_rel_err {
            self.max_rel_err = rel;
        }
        if rel >= MAX_REL_ERR {
            self.failures.push(format!(
                "{context}: analytic {analytic:e} vs numeric {numeric:e} (rel {rel:e})"
            ));
        }
    }
}

impl Default for GradCheckOutcome {
    fn default() -> Self {
        Self::new()
    }
}

pub fn random_tensor(shape: &[usize], lo: f64, hi: f64, rng: &mut Prng) -> Tensor {
    let mut t = Tensor::zeros(shape);
    for v in t.data_mut() {
        *v = rng.uniform_in(lo, hi);
    }
    t
}

/// Central difference of a scalar function along one coordinate of `at`.
fn central_diff(f: &mut dyn FnMut(&Tensor) -> f64, at: &Tensor, idx: usize) -> f64 {
    let mut plus = at.clone();
    plus.data_mut()[idx] += FD_STEP;
    let mut minus = at.clone();
    minus.data_mut()[idx] -= FD_STEP;
    (f(&plus) - f(&minus)) / (2.0 * FD_STEP)
}

fn dot(a: &Tensor, b: &Tensor) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| x * y).sum()
}

/// Minimum |preactivation| of a conv layer on the given input.
fn conv_kink_distance(layer: &ConvLayer, input: &Tensor) -> f64 {
    let mut probe = layer.clone();
    probe.activation = Activation::Identity;
    probe
        .forward(input)
        .expect("probe forward")
        .data()
        .iter()
        .fold(f64::INFINITY, |m, z| m.min(z.abs()))
}

fn dense_kink_distance(layer: &DenseLayer, input: &Tensor) -> f64 {
    let mut probe = layer.clone();
    probe.activation = Activation::Identity;
    probe
        .forward(input)
        .expect("probe forward")
        .data()
        .iter()
        .fold(f64::INFINITY, |m, z| m.min(z.abs()))
}

/// Minimum gap between the two candidates of every pooling window.
fn pool_tie_distance(input: &Tensor) -> f64 {
    let (h, w, c) = (input.shape()[0], input.shape()[1], input.shape()[2]);
    let row = w * c;
    let x = input.data();
    let mut min_gap = f64::INFINITY;
    for i in 0..h / 2 {
        for t in 0..row {
            let gap = (x[2 * i * row + t] - x[(2 * i + 1) * row + t]).abs();
            min_gap = min_gap.min(gap);
        }
    }
    min_gap
}

pub fn check_conv_cases(cases: usize, rng: &mut Prng) -> GradCheckOutcome {
    let mut outcome = GradCheckOutcome::new();
    let mut done = 0;
    while done < cases {
        let fh = 1 + rng.index(3);
        let fw = 1 + rng.index(3);
        let cin = 1 + rng.index(3);
        let k = 1 + rng.index(3);
        let h = fh + rng.index(5);
        let w = fw + rng.index(5);
        let act = if done % 2 == 0 {
            Activation::Relu
        } else {
            Activation::Identity
        };
        let mut layer = ConvLayer::new(fh, fw, cin, k, act, rng);
        for b in layer.bias.data_mut() {
            *b = rng.uniform_in(-0.3, 0.3);
        }
        let input = random_tensor(&[h, w, cin], -1.5, 1.5, rng);
        if act == Activation::Relu && conv_kink_distance(&layer, &input) < KINK_MARGIN {
            continue;
        }
        let output = layer.forward(&input).expect("forward");
        let upstream = random_tensor(output.shape(), -1.0, 1.0, rng);
        let grads = layer.backward(&input, &output, &upstream).expect("backward");

        // d(upstream·out)/d(input)
        let mut f_in = |x: &Tensor| dot(&layer.forward(x).unwrap(), &upstream);
        for idx in 0..input.len() {
            let numeric = central_diff(&mut f_in, &input, idx);
            outcome.record("conv/input", grads.input.data()[idx], numeric);
        }
        // d/d(weights) and d/d(bias)
        for idx in 0..layer.weights.len() {
            let mut f_w = |w: &Tensor| {
                let mut l = layer.clone();
                l.weights = w.clone();
                dot(&l.forward(&input).unwrap(), &upstream)
            };
            let numeric = central_diff(&mut f_w, &layer.weights, idx);
            outcome.record("conv/weights", grads.weights.data()[idx], numeric);
        }
        for idx in 0..layer.bias.len() {
            let mut f_b = |b: &Tensor| {
                let mut l = layer.clone();
                l.bias = b.clone();
                dot(&l.forward(&input).unwrap(), &upstream)
            };
            let numeric = central_diff(&mut f_b, &layer.bias, idx);
            outcome.record("conv/bias", grads.bias.data()[idx], numeric);
        }
        outcome.cases += 1;
        done += 1;
    }
    outcome
}

pub fn check_pool_cases(cases: usize, rng: &mut Prng) -> GradCheckOutcome {
    let mut outcome = GradCheckOutcome::new();
    let mut done = 0;
    while done < cases {
        let h = 2 + rng.index(8);
        let w = 1 + rng.index(3);
        let c = 1 + rng.index(4);
        let input = random_tensor(&[h, w, c], -2.0, 2.0, rng);
        if pool_tie_distance(&input) < KINK_MARGIN {
            continue;
        }
        let fwd = PoolLayer.forward(&input).expect("forward");
        let upstream = random_tensor(fwd.output.shape(), -1.0, 1.0, rng);
        let grad = PoolLayer.backward(&fwd, &upstream).expect("backward");
        let mut f = |x: &Tensor| dot(&PoolLayer.forward(x).unwrap().output, &upstream);
        for idx in 0..input.len() {
            let numeric = central_diff(&mut f, &input, idx);
            outcome.record("pool/input", grad.data()[idx], numeric);
        }
        outcome.cases += 1;
        done += 1;
    }
    outcome
}

pub fn check_dense_cases(cases: usize, rng: &mut Prng) -> GradCheckOutcome {
    let mut outcome = GradCheckOutcome::new();
    let acts = [
        Activation::Identity,
        Activation::Relu,
        Activation::Sigmoid,
        Activation::Tanh,
    ];
    let mut done = 0;
    while done < cases {
        let n_in = 1 + rng.index(8);
        let n_out = 1 + rng.index(5);
        let act = acts[done % acts.len()];
        let mut layer = DenseLayer::new(n_in, n_out, act, rng);
        for b in layer.bias.data_mut() {
            *b = rng.uniform_in(-0.3, 0.3);
        }
        let input = random_tensor(&[n_in], -1.5, 1.5, rng);
        if act == Activation::Relu && dense_kink_distance(&layer, &input) < KINK_MARGIN {
            continue;
        }
        let output = layer.forward(&input).expect("forward");
        let upstream = random_tensor(output.shape(), -1.0, 1.0, rng);
        let grads = layer.backward(&input, &output, &upstream).expect("backward");

        let mut f_in = |x: &Tensor| dot(&layer.forward(x).unwrap(), &upstream);
        for idx in 0..input.len() {
            let numeric = central_diff(&mut f_in, &input, idx);
            outcome.record("dense/input", grads.input.data()[idx], numeric);
        }
        for idx in 0..layer.weights.len() {
            let mut f_w = |w: &Tensor| {
                let mut l = layer.clone();
                l.weights = w.clone();
                dot(&l.forward(&input).unwrap(), &upstream)
            };
            let numeric = central_diff(&mut f_w, &layer.weights, idx);
            outcome.record("dense/weights", grads.weights.data()[idx], numeric);
        }
        for idx in 0..layer.bias.len() {
            let mut f_b = |b: &Tensor| {
                let mut l = layer.clone();
                l.bias = b.clone();
                dot(&l.forward(&input).unwrap(), &upstream)
            };
            let numeric = central_diff(&mut f_b, &layer.bias, idx);
            outcome.record("dense/bias", grads.bias.data()[idx], numeric);
        }
        outcome.cases += 1;
        done += 1;
    }
    outcome
}

/// Dropout with a frozen mask is linear; verify the mask routing anyway.
pub fn check_dropout_cases(cases: usize, rng: &mut Prng) -> GradCheckOutcome {
    let mut outcome = GradCheckOutcome::new();
    for case in 0..cases {
        let n = 4 + rng.index(12);
        let rate = [0.0, 0.1, 0.5][case % 3];
        let layer = DropoutLayer::new(rate);
        let input = random_tensor(&[n], -2.0, 2.0, rng);
        let (_, mask) = layer.forward_train(&input, rng);
        let upstream = random_tensor(&[n], -1.0, 1.0, rng);
        let grad = layer.backward(&mask, &upstream);
        let scale = 1.0 / (1.0 - rate);
        let mut f = |x: &Tensor| {
            let mut acc = 0.0;
            for i in 0..x.len() {
                if mask[i] {
                    acc += x.data()[i] * scale * upstream.data()[i];
                }
            }
            acc
        };
        for idx in 0..input.len() {
            let numeric = central_diff(&mut f, &input, idx);
            outcome.record("dropout/input", grad.data()[idx], numeric);
        }
        outcome.cases += 1;
    }
    outcome
}

pub fn check_loss_cases(cases: usize, rng: &mut Prng) -> GradCheckOutcome {
    let mut outcome = GradCheckOutcome::new();
    for _ in 0..cases {
        let p = rng.uniform_in(0.02, 0.98);
        let y = if rng.uniform() < 0.5 { 0u8 } else { 1u8 };
        let numeric = (loss::bce(p + FD_STEP, y) - loss::bce(p - FD_STEP, y)) / (2.0 * FD_STEP);
        outcome.record("loss/p", loss::bce_grad(p, y), numeric);
        outcome.cases += 1;
    }
    outcome
}

/// The full per-layer verification suite.
pub fn run_layer_suite(seed: u64, cases_per_layer: usize) -> GradCheckOutcome {
    let mut rng = Prng::new(seed);
    let mut outcome = GradCheckOutcome::new();
    outcome.merge(&check_conv_cases(cases_per_layer, &mut rng));
    outcome.merge(&check_pool_cases(cases_per_layer, &mut rng));
    outcome.merge(&check_dense_cases(cases_per_layer, &mut rng));
    outcome.merge(&check_dropout_cases(cases_per_layer, &mut rng));
    outcome.merge(&check_loss_cases(cases_per_layer, &mut rng));
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_suite_passes() {
        let outcome = run_layer_suite(0xC0FFEE, 25);
        assert!(
            outcome.passed(),
            "max rel err {:e}, failures: {:?}",
            outcome.max_rel_err,
            outcome.failures.first()
        );
        assert!(outcome.cases >= 100);
    }

    #[test]
    fn finite_difference_oracle_on_conv_fixture() {
        // Random 6×4×2 input with a 3×1 filter, as an anchored spot check.
        let mut rng = Prng::new(42);
        let outcome = {
            let mut out = GradCheckOutcome::new();
            let mut tries = 0;
            loop {
                tries += 1;
                let layer = ConvLayer::new(3, 1, 2, 2, Activation::Relu, &mut rng);
                let input = random_tensor(&[6, 4, 2], -1.0, 1.0, &mut rng);
                if conv_kink_distance(&layer, &input) < KINK_MARGIN && tries < 50 {
                    continue;
                }
                let output = layer.forward(&input).unwrap();
                let upstream = random_tensor(output.shape(), -1.0, 1.0, &mut rng);
                let grads = layer.backward(&input, &output, &upstream).unwrap();
                let mut f = |x: &Tensor| dot(&layer.forward(x).unwrap(), &upstream);
                for idx in 0..input.len() {
                    let numeric = central_diff(&mut f, &input, idx);
                    out.record("fixture", grads.input.data()[idx], numeric);
                }
                break;
            }
            out
        };
        assert!(outcome.passed(), "max rel err {:e}", outcome.max_rel_err);
    }
}
