//! Spectral-Galerkin simulation and verification lab for a stochastic
//! KdV-Burgers equation on the torus.
//!
//! The equation under study, for a mean-zero field u on the 2*pi torus, is
//!
//!   du = (u_xx - u_xxx + lambda (u^2)_x) dt + phi d/dx dW,
//!
//! truncated to Fourier modes 0 < |n| <= N. The crate provides the spectral
//! machinery (fields, diagonal operators, dealiased products), exact-in-law
//! noise sampling, time integrators for the truncated system, a Picard
//! solver for the mild formulation, discrete Fourier-restriction norms with
//! the dissipative weight, and Monte Carlo harnesses that test white-noise
//! invariance, the Ito energy balance, and the bilinear estimate.

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod invariance;
pub mod mild;
pub mod noise;
pub mod spectral;
pub mod stats;
pub mod xsb;

pub use error::{Error, Result};
