//! Torus geometry, spectral fields, diagonal Fourier operators, and the
//! dealiased quadratic nonlinearity.

pub mod fft;
mod field;
mod grid;
mod multiplier;
mod nonlinearity;

pub use field::SpectralField;
pub use grid::{TorusGrid, TORUS_LENGTH};
pub use multiplier::{semigroup_symbol, MultiplierOp, SymbolKind};
pub use nonlinearity::{convolve_full, nonlinearity, nonlinearity_into, NonlinearityWorkspace};
