//! From-scratch CNN framework for next-day market direction prediction.
//!
//! The crate is organized in five layers:
//!
//! - [`tensor`] / [`kernel`] — dense f64 tensors plus forward/backward
//!   implementations of every layer, loss, optimizer, PRNG, and PCA the
//!   models need. No external math dependencies; everything is gradient-
//!   checked against central finite differences.
//! - [`indicators`] — technical-indicator and calendar primitives over
//!   date-aligned series (EMA, ROC, lagged returns, spreads, and the
//!   ten-indicator baseline set).
//! - [`data`] — CSV ingestion, calendar alignment, the 82-column feature
//!   table, z-score normalization, chronological splitting, sample
//!   windowing, the binary dataset format, and a synthetic data generator.
//! - [`model`] — the 2D/3D convolutional architectures and the ANN
//!   baselines, mini-batch Adam training with early stopping, and binary
//!   checkpoints.
//! - [`eval`] — macro-averaged F-measure, Welch's t-test, the multi-seed
//!   experiment runner, and report emission.

pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod indicators;
pub mod kernel;
pub mod model;
pub mod tensor;

pub use error::Error;
pub use tensor::Tensor;
