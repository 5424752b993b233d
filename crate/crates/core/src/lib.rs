//! Noisy k-partite community recovery.
//!
//! Builds the four observation models (vector differences `T`, partition
//! indicators `R`, and the unit-modulus `U`/`V`), scores assignments against
//! them, computes the closed-form separation statistics and σ-thresholds,
//! solves exhaustive MLEs on small instances, runs the complex SDP relaxation
//! with its dual certificate, and drives seeded Monte Carlo sweeps.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod matrices;
pub mod mle;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod sdp;
pub mod statistics;

pub use error::{Error, Result};
