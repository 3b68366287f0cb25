use num_complex::Complex64;

use crate::error::{Error, Result};

use super::fft;
use super::grid::TorusGrid;

/// Mean-zero real field on the torus, stored as Fourier coefficients for
/// modes n = 1..=n_max. Negative modes are implied by c_{-n} = conj(c_n)
/// and the zero mode is identically zero, so reality and mean-zero hold by
/// construction.
///
/// All norms in this crate are coefficient-space sums over 0 < |n| <= N;
/// the 2*pi volume factor of L^2(T, dx) is omitted throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zero(grid: TorusGrid) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n_max()],
            grid,
        }
    }

    /// Build from coefficients for modes 1..=n_max.
    pub fn from_coeffs(grid: TorusGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n_max() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                grid.n_max(),
                coeffs.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn n_max(&self) -> usize {
        self.grid.n_max()
    }

    /// Coefficient for any mode; negative modes via Hermitian symmetry,
    /// zero outside 0 < |n| <= n_max.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let a = n.unsigned_abs() as usize;
        if n == 0 || a > self.grid.n_max() {
            Complex64::new(0.0, 0.0)
        } else if n > 0 {
            self.coeffs[a - 1]
        } else {
            self.coeffs[a - 1].conj()
        }
    }

    pub fn set_coeff(&mut self, n: usize, value: Complex64) {
        assert!(n >= 1 && n <= self.grid.n_max(), "mode out of range");
        self.coeffs[n - 1] = value;
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Synthesize physical values on the grid's collocation points.
    /// The imaginary residue of the inverse transform is checked against
    /// the field magnitude (reality holds by construction).
    pub fn to_physical(&self) -> Vec<f64> {
        let m = self.grid.m_phys();
        let n = self.grid.n_max();
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for k in 1..=n {
            buf[k] = self.coeffs[k - 1];
            buf[m - k] = self.coeffs[k - 1].conj();
        }
        fft::inverse(&mut buf);
        let scale: f64 = self.coeffs.iter().map(|c| c.norm()).sum::<f64>().max(1.0);
        let max_im = buf.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        debug_assert!(
            max_im <= 1e-12 * scale,
            "imaginary residue {max_im:.3e} exceeds 1e-12 of field magnitude"
        );
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Project samples of a real function onto modes 1..=n_max of `grid`.
    /// The mean mode is discarded. Errors if the grid cannot represent the
    /// modes (M < 2N+1 is rejected at grid construction, but the sample
    /// count must also match the grid).
    pub fn from_physical(values: &[f64], grid: TorusGrid) -> Result<Self> {
        let m = grid.m_phys();
        if values.len() != m {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                m,
                values.len()
            )));
        }
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft::forward(&mut buf);
        let inv_m = 1.0 / m as f64;
        let coeffs = (1..=grid.n_max()).map(|k| buf[k] * inv_m).collect();
        Ok(Self { grid, coeffs })
    }

    /// Sobolev norm (sum_{0<|n|<=N} <n>^{2s} |c_n|^2)^{1/2} with the
    /// Japanese bracket <n> = (1 + n^2)^{1/2}.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let n = (k + 1) as f64;
                (1.0 + n * n).powf(s) * c.norm_sqr()
            })
            .sum();
        (2.0 * sum).sqrt()
    }

    /// Homogeneous variant with weight |n|^{2s}.
    pub fn homogeneous_sobolev_norm(&self, s: f64) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let n = (k + 1) as f64;
                (n * n).powf(s) * c.norm_sqr()
            })
            .sum();
        (2.0 * sum).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    pub fn l2_norm_sqr(&self) -> f64 {
        2.0 * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Real L^2 pairing <u, v> = sum_{0<|n|<=N} conj(u_n) v_n (real by
    /// Hermitian symmetry).
    pub fn l2_pairing(&self, other: &SpectralField) -> f64 {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut acc = 0.0;
        for k in 0..n {
            acc += (self.coeffs[k].conj() * other.coeffs[k]).re;
        }
        2.0 * acc
    }

    pub fn scale_mut(&mut self, factor: f64) {
        for c in &mut self.coeffs {
            *c *= factor;
        }
    }

    /// self += factor * other (grids must match).
    pub fn axpy_mut(&mut self, factor: f64, other: &SpectralField) -> Result<()> {
        self.check_grid(other)?;
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += factor * o;
        }
        Ok(())
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid.n_max() != other.grid.n_max() {
            return Err(Error::GridMismatch {
                expected: self.grid.n_max(),
                got: other.grid.n_max(),
            });
        }
        Ok(())
    }
}
