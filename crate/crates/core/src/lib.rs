//! User-centric intercell interference nulling for Poisson small cell networks.
//!
//! Two engines evaluate the success probability `P(SIR >= γ̂)` of the typical user:
//! [`analytics`] evaluates the Toeplitz/Poisson-mixture approximation, and
//! [`simulator`] runs the full physical model by Monte Carlo on a torus.

pub mod analytics;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod optimizer;
pub mod params;
pub mod quadrature;
pub mod simulator;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use params::{load_config, NetworkConfig};
