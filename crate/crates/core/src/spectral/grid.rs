use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

use super::fft::next_fft_len;

/// Spectral discretization of the 2*pi torus.
///
/// Fields carry modes 0 < |n| <= n_max; `m_phys` collocation points are used
/// for physical-space evaluation. Representing a field needs
/// m_phys >= 2*n_max + 1; evaluating quadratic products without aliasing
/// needs m_phys >= 3*n_max + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGrid {
    n_max: usize,
    m_phys: usize,
}

/// Domain length, fixed.
pub const TORUS_LENGTH: f64 = 2.0 * std::f64::consts::PI;

impl TorusGrid {
    pub fn new(n_max: usize, m_phys: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidParameter("n_max must be >= 1".into()));
        }
        if m_phys < 2 * n_max + 1 {
            return Err(Error::Undersampled {
                m: m_phys,
                n_max,
                requirement: "M >= 2N+1",
            });
        }
        Ok(Self { n_max, m_phys })
    }

    /// Grid sized for exact quadratic products (M >= 3N+1, rounded up to an
    /// FFT-friendly length).
    pub fn dealiased(n_max: usize) -> Result<Self> {
        Self::new(n_max, next_fft_len(3 * n_max + 1))
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn m_phys(&self) -> usize {
        self.m_phys
    }

    /// True when quadratic products evaluated on this grid are alias-free.
    pub fn supports_quadratic(&self) -> bool {
        self.m_phys >= 3 * self.n_max + 1
    }

    /// Collocation points x_j = 2 pi j / M.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.m_phys as f64;
        (0..self.m_phys).map(move |j| TORUS_LENGTH * j as f64 / m)
    }
}
