use num_complex::Complex64;

use crate::error::{Error, Result};

use super::fft;
use super::field::SpectralField;

/// coefficient * P_N[(f^2)_x], evaluated pseudospectrally: synthesize on the
/// collocation grid, square pointwise, project back, then differentiate.
/// With M >= 3N+1 the projected convolution is exact, so this computes the
/// truncated system's quadratic term without aliasing error.
pub fn nonlinearity(f: &SpectralField, coefficient: f64) -> Result<SpectralField> {
    let grid = f.grid();
    if !grid.supports_quadratic() {
        return Err(Error::Undersampled {
            m: grid.m_phys(),
            n_max: grid.n_max(),
            requirement: "M >= 3N+1 for quadratic products",
        });
    }
    let mut out = f.clone();
    nonlinearity_into(f, coefficient, &mut NonlinearityWorkspace::new(grid.m_phys()), &mut out)?;
    Ok(out)
}

/// Scratch buffers for the hot path; one per integration task.
pub struct NonlinearityWorkspace {
    buf: Vec<Complex64>,
}

impl NonlinearityWorkspace {
    pub fn new(m_phys: usize) -> Self {
        Self {
            buf: vec![Complex64::new(0.0, 0.0); m_phys],
        }
    }
}

/// Same as [`nonlinearity`] but writing into `out` using caller scratch.
pub fn nonlinearity_into(
    f: &SpectralField,
    coefficient: f64,
    ws: &mut NonlinearityWorkspace,
    out: &mut SpectralField,
) -> Result<()> {
    let grid = f.grid();
    let m = grid.m_phys();
    let n = grid.n_max();
    if !grid.supports_quadratic() {
        return Err(Error::Undersampled {
            m,
            n_max: n,
            requirement: "M >= 3N+1 for quadratic products",
        });
    }
    if ws.buf.len() != m {
        ws.buf.resize(m, Complex64::new(0.0, 0.0));
    }
    let buf = &mut ws.buf;
    buf.fill(Complex64::new(0.0, 0.0));
    for k in 1..=n {
        let c = f.coeffs()[k - 1];
        buf[k] = c;
        buf[m - k] = c.conj();
    }
    fft::inverse(buf);
    for z in buf.iter_mut() {
        let v = z.re;
        *z = Complex64::new(v * v, 0.0);
    }
    fft::forward(buf);
    let inv_m = 1.0 / m as f64;
    for k in 1..=n {
        // (in) * projection of the square, scaled by the configured sign.
        let sq = buf[k] * inv_m;
        out.coeffs_mut()[k - 1] = Complex64::new(0.0, coefficient * k as f64) * sq;
    }
    Ok(())
}

/// Full convolution of two coefficient vectors: modes 1..=(n1+n2) of u*v,
/// where u, v carry modes up to n1, n2 with Hermitian extension. Used where
/// the un-projected product is needed (space-time products, generator drift).
pub fn convolve_full(u: &SpectralField, v: &SpectralField) -> Vec<Complex64> {
    let n1 = u.n_max() as i64;
    let n2 = v.n_max() as i64;
    let n_out = (n1 + n2) as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); n_out];
    for n in 1..=n_out as i64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let lo = (-n1).max(n - n2);
        let hi = n1.min(n + n2);
        for k in lo..=hi {
            if k == 0 || k == n {
                continue;
            }
            acc += u.coeff(k) * v.coeff(n - k);
        }
        out[(n - 1) as usize] = acc;
    }
    out
}
