//! Elementwise activations with derivatives expressed from the output.

/// Activation applied elementwise after a layer's affine map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Identity,
    Relu,
    Sigmoid,
    Tanh,
}

pub fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Standard increasing logistic 1/(1+e^{-x}).
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Relu => relu(x),
            Activation::Sigmoid => sigmoid(x),
            Activation::Tanh => x.tanh(),
        }
    }

    /// Derivative dy/dx expressed as a function of the output y.
    /// For ReLU the subgradient at 0 is taken as 0.
    #[inline]
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => y * (1.0 - y),
            Activation::Tanh => 1.0 - y * y,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rng::Prng;

    #[test]
    fn relu_basics() {
        assert_eq!(relu(-3.0), 0.0);
        assert_eq!(relu(2.0), 2.0);
        assert_eq!(relu(0.0), 0.0);
    }

    #[test]
    fn sigmoid_at_zero() {
        assert_eq!(sigmoid(0.0), 0.5);
    }

    #[test]
    fn sigmoid_symmetry() {
        let mut rng = Prng::new(5);
        for _ in 0..100 {
            let x = rng.uniform_in(-20.0, 20.0);
            let s = sigmoid(x) + sigmoid(-x);
            assert!((s - 1.0).abs() < 1e-12, "x={x} sum={s}");
        }
    }

    #[test]
    fn sigmoid_monotone_into_unit_interval() {
        // Beyond |x| ≈ 36.7 the f64 result rounds to exactly 0 or 1.
        let mut prev = sigmoid(-35.0);
        let mut x = -35.0;
        while x <= 35.0 {
            let y = sigmoid(x);
            assert!(y > 0.0 && y < 1.0);
            assert!(y >= prev);
            prev = y;
            x += 0.5;
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = Prng::new(9);
        let h = 1e-6;
        for act in [Activation::Identity, Activation::Sigmoid, Activation::Tanh] {
            for _ in 0..50 {
                let x = rng.uniform_in(-3.0, 3.0);
                let numeric = (act.apply(x + h) - act.apply(x - h)) / (2.0 * h);
                let analytic = act.derivative_from_output(act.apply(x));
                assert!((numeric - analytic).abs() < 1e-6, "{act:?} at {x}");
            }
        }
        // ReLU away from the kink.
        for _ in 0..50 {
            let x = rng.uniform_in(0.1, 3.0) * if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
            let numeric = (relu(x + h) - relu(x - h)) / (2.0 * h);
            let analytic = Activation::Relu.derivative_from_output(relu(x));
            assert!((numeric - analytic).abs() < 1e-6);
        }
    }
}
