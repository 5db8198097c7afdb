//! Construction, validation, decoding, and Monte Carlo evaluation of
//! α-interpolated quantum polar / quantum Reed-Muller CSS codes for Pauli
//! channels.
//!
//! The crate is organized along the pipeline:
//!
//! - [`polar`]: GF(2) bit vectors and the Kronecker-power transform
//!   `G = E^{⊗n}` in natural index order.
//! - [`channel`]: symmetric binary-input DMCs, the Pauli-to-classical
//!   reduction, Arikan channel splitting, and degrading-merge quantization.
//! - [`construction`]: frozen-set design for the interpolating code family,
//!   CSS validity, stabilizer extraction, and structural metrics.
//! - [`decoder`]: SC / SCL / SCL-C syndrome decoders with exact log-domain
//!   metrics.
//! - [`simulator`]: seeded, thread-count-independent logical-error-rate
//!   estimation and α sweeps.
//! - [`automorphism`]: decreasing-monomial structure and exact BLTA
//!   automorphism-group sizes.

pub mod automorphism;
pub mod channel;
pub mod construction;
pub mod decoder;
pub mod error;
pub mod polar;
pub mod simulator;

pub use error::{Error, Result};
