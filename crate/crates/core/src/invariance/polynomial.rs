use crate::error::{Error, Result};

/// Multivariate polynomial in the coefficient variables
/// (a_1, ..., a_N, b_1, ..., b_N), total degree at most 4, with evaluation
/// and analytic partial derivatives up to second order. Variables are
/// indexed 0..2N: index n-1 is a_n, index N+n-1 is b_n.
#[derive(Debug, Clone)]
pub struct TestFunctionPoly {
    n_vars: usize,
    /// (coefficient, exponent per variable).
    terms: Vec<(f64, Vec<u8>)>,
}

pub const MAX_DEGREE: u32 = 4;

impl TestFunctionPoly {
    pub fn new(n_vars: usize, terms: Vec<(f64, Vec<u8>)>) -> Result<Self> {
        for (_, exps) in &terms {
            if exps.len() != n_vars {
                return Err(Error::InvalidParameter(
                    "exponent vector length mismatch".into(),
                ));
            }
            let degree: u32 = exps.iter().map(|&e| e as u32).sum();
            if degree > MAX_DEGREE {
                return Err(Error::InvalidParameter(format!(
                    "total degree {degree} exceeds {MAX_DEGREE}"
                )));
            }
        }
        Ok(Self { n_vars, terms })
    }

    /// Monomial builder: product of (variable index, exponent) factors.
    pub fn monomial(n_vars: usize, coeff: f64, factors: &[(usize, u8)]) -> Result<Self> {
        let mut exps = vec![0u8; n_vars];
        for &(idx, e) in factors {
            if idx >= n_vars {
                return Err(Error::InvalidParameter("variable index out of range".into()));
            }
            exps[idx] += e;
        }
        Self::new(n_vars, vec![(coeff, exps)])
    }

    pub fn sum(mut self, other: &TestFunctionPoly) -> Result<Self> {
        if self.n_vars != other.n_vars {
            return Err(Error::InvalidParameter("variable count mismatch".into()));
        }
        self.terms.extend(other.terms.iter().cloned());
        Ok(self)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n_vars);
        self.terms
            .iter()
            .map(|(c, exps)| {
                let mut prod = *c;
                for (v, &e) in x.iter().zip(exps) {
                    for _ in 0..e {
                        prod *= v;
                    }
                }
                prod
            })
            .sum()
    }

    /// First partial derivative with respect to variable `idx`, evaluated
    /// at x.
    pub fn d1(&self, idx: usize, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, exps)| {
                let e = exps[idx];
                if e == 0 {
                    return 0.0;
                }
                let mut prod = *c * e as f64;
                for (j, (&v, &ej)) in x.iter().zip(exps).enumerate() {
                    let pow = if j == idx { ej - 1 } else { ej };
                    for _ in 0..pow {
                        prod *= v;
                    }
                }
                prod
            })
            .sum()
    }

    /// Second partial derivative d^2/dx_idx^2 evaluated at x.
    pub fn d2(&self, idx: usize, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, exps)| {
                let e = exps[idx];
                if e < 2 {
                    return 0.0;
                }
                let mut prod = *c * (e as f64) * (e as f64 - 1.0);
                for (j, (&v, &ej)) in x.iter().zip(exps).enumerate() {
                    let pow = if j == idx { ej - 2 } else { ej };
                    for _ in 0..pow {
                        prod *= v;
                    }
                }
                prod
            })
            .sum()
    }
}

/// The fixed battery of 20 test polynomials for N modes (2N variables):
/// linear, quadratic (including the per-mode energies), resonant cubic, and
/// quartic shapes, plus symmetric sums. Indices must satisfy N >= 4.
pub fn battery(n_modes: usize) -> Vec<(String, TestFunctionPoly)> {
    assert!(n_modes >= 4);
    let nv = 2 * n_modes;
    let a = |n: usize| n - 1;
    let b = |n: usize| n_modes + n - 1;
    let mono = |c: f64, f: &[(usize, u8)]| TestFunctionPoly::monomial(nv, c, f).unwrap();
    let mut out: Vec<(String, TestFunctionPoly)> = Vec::new();
    out.push(("a1".into(), mono(1.0, &[(a(1), 1)])));
    out.push(("b2".into(), mono(1.0, &[(b(2), 1)])));
    out.push((
        "a1^2+b1^2".into(),
        mono(1.0, &[(a(1), 2)]).sum(&mono(1.0, &[(b(1), 2)])).unwrap(),
    ));
    out.push((
        "a2^2-b2^2".into(),
        mono(1.0, &[(a(2), 2)]).sum(&mono(-1.0, &[(b(2), 2)])).unwrap(),
    ));
    out.push(("a1*a2".into(), mono(1.0, &[(a(1), 1), (a(2), 1)])));
    out.push(("a1*b1".into(), mono(1.0, &[(a(1), 1), (b(1), 1)])));
    out.push(("b1*b3".into(), mono(1.0, &[(b(1), 1), (b(3), 1)])));
    // Symmetric quadratic: sum_n (a_n^2 + b_n^2).
    let mut energy = mono(1.0, &[(a(1), 2)]);
    for n in 1..=n_modes {
        if n > 1 {
            energy = energy.sum(&mono(1.0, &[(a(n), 2)])).unwrap();
        }
        energy = energy.sum(&mono(1.0, &[(b(n), 2)])).unwrap();
    }
    out.push(("sum(a^2+b^2)".into(), energy));
    // Cubics, including shapes resonant with the convolution drift
    // (indices with n = n1 + n2).
    out.push(("a1*a2*b3".into(), mono(1.0, &[(a(1), 1), (a(2), 1), (b(3), 1)])));
    out.push(("a1*a1*a2".into(), mono(1.0, &[(a(1), 2), (a(2), 1)])));
    out.push(("b1*b2*a3".into(), mono(1.0, &[(b(1), 1), (b(2), 1), (a(3), 1)])));
    out.push(("a1*b2*b3".into(), mono(1.0, &[(a(1), 1), (b(2), 1), (b(3), 1)])));
    out.push(("a1^3".into(), mono(1.0, &[(a(1), 3)])));
    out.push(("a2*b2*b4".into(), mono(1.0, &[(a(2), 1), (b(2), 1), (b(4), 1)])));
    // Quartics.
    out.push(("a1^4".into(), mono(1.0, &[(a(1), 4)])));
    out.push(("(a1^2+b1^2)^2".into(), {
        mono(1.0, &[(a(1), 4)])
            .sum(&mono(2.0, &[(a(1), 2), (b(1), 2)]))
            .unwrap()
            .sum(&mono(1.0, &[(b(1), 4)]))
            .unwrap()
    }));
    out.push(("a1^2*a2^2".into(), mono(1.0, &[(a(1), 2), (a(2), 2)])));
    out.push(("a1*a2*a3*a4".into(), {
        mono(1.0, &[(a(1), 1), (a(2), 1), (a(3), 1), (a(4), 1)])
    }));
    out.push(("b1^2*b3^2".into(), mono(1.0, &[(b(1), 2), (b(3), 2)])));
    out.push(("a1^2*b2*b4".into(), mono(1.0, &[(a(1), 2), (b(2), 1), (b(4), 1)])));
    assert_eq!(out.len(), 20);
    out
}
