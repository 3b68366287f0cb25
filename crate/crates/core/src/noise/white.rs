use num_complex::Complex64;

use crate::spectral::{SpectralField, TorusGrid};

use super::streams::{normal_pair, Domain, NoiseStreams};

/// Draw a field from the truncated white-noise law: per mode c_n = a_n + i b_n
/// with a_n, b_n independent N(0, 1/2), so E|c_n|^2 = 1. Deterministic for
/// fixed (streams, path).
pub fn sample_white_noise(grid: TorusGrid, streams: &NoiseStreams, path: u64) -> SpectralField {
    let mut field = SpectralField::zero(grid);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for n in 1..=grid.n_max() {
        let mut rng = streams.cell_rng(path, Domain::Init, 0, n);
        let (g1, g2) = normal_pair(&mut rng);
        field.set_coeff(n, Complex64::new(g1 * inv_sqrt2, g2 * inv_sqrt2));
    }
    field
}

/// Convenience wrapper for a standalone draw.
pub fn sample_white_noise_seeded(grid: TorusGrid, seed: u64) -> SpectralField {
    sample_white_noise(grid, &NoiseStreams::new(seed), 0)
}
