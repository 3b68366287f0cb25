//! White-noise sampling, smoothing operators, Brownian paths, and
//! exact-in-law stochastic convolution increments.

mod brownian;
mod convolution;
mod phi;
mod streams;
mod white;

pub use brownian::{sample_brownian, BrownianPath};
pub use convolution::{
    generate_path_noise, mode_step_draw, phi1, phi2, stochastic_convolution_path,
    stochastic_convolution_path_refined, stochastic_convolution_step, LinearKind, ModeStepDraw, PathNoise,
};
pub use phi::{phi_operator, PhiSpec};
pub use streams::{normal_pair, Domain, NoiseStreams};
pub use white::{sample_white_noise, sample_white_noise_seeded};
