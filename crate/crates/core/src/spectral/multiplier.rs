use num_complex::Complex64;

use crate::error::{Error, Result};

use super::field::SpectralField;

/// What a diagonal operator represents; `Phi` symbols are real.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Phi,
    Derivative,
    Projection,
    Semigroup,
    Custom,
}

/// Diagonal Fourier operator n -> m_n on modes 1..=n_max; the action on
/// negative modes is m_{-n} = conj(m_n), so real fields stay real.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierOp {
    n_max: usize,
    symbol: Vec<Complex64>,
    kind: SymbolKind,
}

impl MultiplierOp {
    pub fn new(n_max: usize, symbol: Vec<Complex64>, kind: SymbolKind) -> Result<Self> {
        if symbol.len() != n_max {
            return Err(Error::InvalidParameter(format!(
                "expected {} symbol entries, got {}",
                n_max,
                symbol.len()
            )));
        }
        if kind == SymbolKind::Phi && symbol.iter().any(|m| m.im != 0.0 || !m.re.is_finite()) {
            return Err(Error::InvalidParameter(
                "phi symbols must be real and finite".into(),
            ));
        }
        Ok(Self {
            n_max,
            symbol,
            kind,
        })
    }

    pub fn identity(n_max: usize) -> Self {
        Self {
            n_max,
            symbol: vec![Complex64::new(1.0, 0.0); n_max],
            kind: SymbolKind::Phi,
        }
    }

    pub fn zero(n_max: usize) -> Self {
        Self {
            n_max,
            symbol: vec![Complex64::new(0.0, 0.0); n_max],
            kind: SymbolKind::Phi,
        }
    }

    /// d/dx, symbol in.
    pub fn derivative(n_max: usize) -> Self {
        let symbol = (1..=n_max)
            .map(|n| Complex64::new(0.0, n as f64))
            .collect();
        Self {
            n_max,
            symbol,
            kind: SymbolKind::Derivative,
        }
    }

    /// Projection onto modes |n| <= cutoff.
    pub fn projection(n_max: usize, cutoff: usize) -> Self {
        let symbol = (1..=n_max)
            .map(|n| Complex64::new(if n <= cutoff { 1.0 } else { 0.0 }, 0.0))
            .collect();
        Self {
            n_max,
            symbol,
            kind: SymbolKind::Projection,
        }
    }

    /// KdV-Burgers propagator S(t): m_n = exp(-n^2 |t| + i n^3 t), defined
    /// for all real t. |m_n| <= 1 and S(0) = Id.
    pub fn semigroup(t: f64, n_max: usize) -> Self {
        let symbol = (1..=n_max)
            .map(|n| {
                let nf = n as f64;
                semigroup_symbol(nf, t)
            })
            .collect();
        Self {
            n_max,
            symbol,
            kind: SymbolKind::Semigroup,
        }
    }

    /// Smoothing operator phi = |d/dx|^{-beta}: phi_n = |n|^{-beta}.
    pub fn phi_power(beta: f64, n_max: usize) -> Result<Self> {
        if !(beta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "phi power must be >= 0, got {beta}"
            )));
        }
        let symbol = (1..=n_max)
            .map(|n| Complex64::new((n as f64).powf(-beta), 0.0))
            .collect();
        Self::new(n_max, symbol, SymbolKind::Phi)
    }

    /// Smoothing operator from an explicit real table phi_1..phi_N.
    pub fn phi_table(values: &[f64], n_max: usize) -> Result<Self> {
        if values.len() != n_max {
            return Err(Error::InvalidParameter(format!(
                "phi table length {} != n_max {}",
                values.len(),
                n_max
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "phi table entries must be finite".into(),
            ));
        }
        let symbol = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::new(n_max, symbol, SymbolKind::Phi)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    /// Symbol at mode n (1-based).
    pub fn symbol(&self, n: usize) -> Complex64 {
        self.symbol[n - 1]
    }

    /// Real part of the symbol; used for phi operators.
    pub fn real_symbol(&self, n: usize) -> f64 {
        self.symbol[n - 1].re
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbol
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.iter().all(|m| m.norm_sqr() == 0.0)
    }

    /// Coefficient-wise product m_n c_n.
    pub fn apply(&self, f: &SpectralField) -> Result<SpectralField> {
        if f.n_max() != self.n_max {
            return Err(Error::GridMismatch {
                expected: self.n_max,
                got: f.n_max(),
            });
        }
        let mut out = f.clone();
        for (c, m) in out.coeffs_mut().iter_mut().zip(&self.symbol) {
            *c *= m;
        }
        Ok(out)
    }

    /// Hilbert-Schmidt norm (sum_{0<|n|<=N} <n>^{2s} |m_n|^2)^{1/2}.
    pub fn hs_norm(&self, s: f64) -> f64 {
        let sum: f64 = self
            .symbol
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let n = (k + 1) as f64;
                (1.0 + n * n).powf(s) * m.norm_sqr()
            })
            .sum();
        (2.0 * sum).sqrt()
    }

    /// Homogeneous variant with weight |n|^{2s}; s = 1 gives the
    /// homogeneous H^1 norm appearing in the energy balance.
    pub fn homogeneous_hs_norm(&self, s: f64) -> f64 {
        let sum: f64 = self
            .symbol
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let n = (k + 1) as f64;
                (n * n).powf(s) * m.norm_sqr()
            })
            .sum();
        (2.0 * sum).sqrt()
    }
}

/// exp(-n^2 |t| + i n^3 t) for a single mode.
pub fn semigroup_symbol(n: f64, t: f64) -> Complex64 {
    let damp = (-n * n * t.abs()).exp();
    let phase = n * n * n * t;
    Complex64::new(damp * phase.cos(), damp * phase.sin())
}
