//! From-scratch differentiable kernel: layers, loss, optimizer, PRNG, PCA.
//!
//! Every backward pass here is verified against central finite differences
//! by [`gradcheck`]; the same suite backs the `gradcheck` CLI subcommand.

pub mod activation;
pub mod adam;
pub mod conv;
pub mod dense;
pub mod dropout;
pub mod gradcheck;
pub mod loss;
pub mod pca;
pub mod pool;
pub mod rng;

pub use activation::Activation;
pub use adam::{Adam, AdamConfig};
pub use conv::ConvLayer;
pub use dense::DenseLayer;
pub use dropout::DropoutLayer;
pub use pca::PcaFit;
pub use pool::PoolLayer;
pub use rng::Prng;
