//! Time integration of the truncated stochastic KdV-Burgers system and its
//! KdV/OU splitting, with energy tracking and blowup detection.

mod integrate;
mod stepper;

pub use integrate::{integrate, integrate_with_noise, Observables, Trajectory};
pub use stepper::{IntegratorConfig, Scheme, Stepper};
