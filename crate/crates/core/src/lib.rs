//! Analog fountain codes over the AWGN channel.
//!
//! Coded symbols are real-valued weighted sums of BPSK information symbols,
//! sent directly over the channel and decoded by belief propagation on the
//! weighted bipartite graph. An outer high-rate LDPC precode removes the
//! residual error floor. The [`analysis`] module carries the closed-form
//! tools for weight-set design and error probability, and [`harness`] drives
//! seeded Monte Carlo sweeps.

pub mod analysis;
pub mod channel;
pub mod decoder;
pub mod encoder;
pub mod error;
pub mod graph;
pub mod harness;
pub mod precoder;
pub mod rng;
pub mod weights;

pub use error::{Error, Result};
