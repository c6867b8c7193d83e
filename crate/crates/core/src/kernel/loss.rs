//! Binary cross-entropy over a sigmoid probability output.

const CLAMP: f64 = 1e-12;

#[inline]
fn clamp_p(p: f64) -> f64 {
    p.clamp(CLAMP, 1.0 - CLAMP)
}

/// −(y·ln p + (1−y)·ln(1−p)), with p clamped to [1e−12, 1−1e−12].
pub fn bce(probability: f64, label: u8) -> f64 {
    let p = clamp_p(probability);
    if label == 1 {
        -p.ln()
    } else {
        -(1.0 - p).ln()
    }
}

/// dL/dp for the clamped loss.
pub fn bce_grad(probability: f64, label: u8) -> f64 {
    let p = clamp_p(probability);
    if label == 1 {
        -1.0 / p
    } else {
        1.0 / (1.0 - p)
    }
}

/// Mean loss over a batch of (probability, label) pairs.
pub fn bce_batch(pairs: &[(f64, u8)]) -> f64 {
    assert!(!pairs.is_empty(), "empty batch");
    pairs.iter().map(|&(p, y)| bce(p, y)).sum::<f64>() / pairs.len() as f64
}
