use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::noise::{sample_white_noise, NoiseStreams};
use crate::spectral::{MultiplierOp, SpectralField, TorusGrid};
use crate::stats::RunningStats;

use super::ensemble::run_blocked;
use super::polynomial::{TestFunctionPoly, MAX_DEGREE};

/// Which block of the generator to pair against the invariant measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeneratorPart {
    /// Drift of the truncated KdV flow (dispersion + quadratic transport).
    KdV,
    /// Per-mode OU block (dissipation + noise).
    Ou,
    /// Sum of both.
    Full,
}

/// Drift of the truncated KdV block in coefficient variables:
///   da_n/dt = -n^3 b_n + lambda Re[(in) sum_{n1+n2=n} c_{n1} c_{n2}]
///   db_n/dt = +n^3 a_n + lambda Im[(in) sum_{n1+n2=n} c_{n1} c_{n2}].
fn kdv_drift(x: &[f64], n_modes: usize, lambda: f64) -> Vec<f64> {
    let coeff = |n: i64| -> Complex64 {
        let a = n.unsigned_abs() as usize;
        if n == 0 || a > n_modes {
            Complex64::new(0.0, 0.0)
        } else if n > 0 {
            Complex64::new(x[a - 1], x[n_modes + a - 1])
        } else {
            Complex64::new(x[a - 1], -x[n_modes + a - 1])
        }
    };
    let mut drift = vec![0.0; 2 * n_modes];
    for n in 1..=n_modes as i64 {
        let mut conv = Complex64::new(0.0, 0.0);
        for n1 in -(n_modes as i64)..=(n_modes as i64) {
            let n2 = n - n1;
            if n1 == 0 || n2 == 0 || n2.abs() > n_modes as i64 {
                continue;
            }
            conv += coeff(n1) * coeff(n2);
        }
        let nf = n as f64;
        let transport = Complex64::new(0.0, lambda * nf) * conv;
        let k = (n - 1) as usize;
        let (a, b) = (x[k], x[n_modes + k]);
        drift[k] = -nf * nf * nf * b + transport.re;
        drift[n_modes + k] = nf * nf * nf * a + transport.im;
    }
    drift
}

/// Apply the requested generator block to f at the point x.
pub fn generator_apply(
    f: &TestFunctionPoly,
    part: GeneratorPart,
    n_modes: usize,
    phi: &MultiplierOp,
    lambda: f64,
    x: &[f64],
) -> f64 {
    let mut total = 0.0;
    if matches!(part, GeneratorPart::KdV | GeneratorPart::Full) {
        let drift = kdv_drift(x, n_modes, lambda);
        for idx in 0..2 * n_modes {
            let d = drift[idx];
            if d != 0.0 {
                total += d * f.d1(idx, x);
            }
        }
    }
    if matches!(part, GeneratorPart::Ou | GeneratorPart::Full) {
        for n in 1..=n_modes {
            let nf = n as f64;
            let phi_n = phi.real_symbol(n);
            let k = n - 1;
            let diffusion = 0.5 * nf * nf * phi_n * phi_n;
            total += -nf * nf * (x[k] * f.d1(k, x) + x[n_modes + k] * f.d1(n_modes + k, x))
                + diffusion * (f.d2(k, x) + f.d2(n_modes + k, x));
        }
    }
    total
}

/// Monte Carlo pairing of Lf against the truncated white-noise law:
/// returns (estimate of E[Lf], standard error). The estimate should vanish
/// within noise for every polynomial of degree <= 4.
pub fn generator_pairing(
    f: &TestFunctionPoly,
    part: GeneratorPart,
    n_modes: usize,
    phi: &MultiplierOp,
    lambda: f64,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if f.n_vars() != 2 * n_modes {
        return Err(Error::InvalidParameter(
            "polynomial variable count must be 2 N".into(),
        ));
    }
    if f.degree() > MAX_DEGREE {
        return Err(Error::InvalidParameter("degree exceeds 4".into()));
    }
    let grid = TorusGrid::new(n_modes, 2 * n_modes + 1)?;
    let streams = NoiseStreams::new(seed);
    let stats = run_blocked(
        samples,
        8192,
        |range| {
            let mut s = RunningStats::default();
            let mut x = vec![0.0; 2 * n_modes];
            for p in range {
                let field = sample_white_noise(grid, &streams, p);
                for n in 1..=n_modes {
                    let c = field.coeff(n as i64);
                    x[n - 1] = c.re;
                    x[n_modes + n - 1] = c.im;
                }
                s.push(generator_apply(f, part, n_modes, phi, lambda, &x));
            }
            s
        },
        |acc: &mut RunningStats, part_stats| acc.merge(&part_stats),
        RunningStats::default(),
    );
    Ok((stats.mean(), stats.standard_error()))
}

/// One battery entry: estimates for the KdV block, OU block, and their sum.
#[derive(Debug, Clone, Serialize)]
pub struct BatteryEntry {
    pub name: String,
    pub l1_mean: f64,
    pub l1_se: f64,
    pub l2_mean: f64,
    pub l2_se: f64,
    pub full_mean: f64,
    pub full_se: f64,
    pub pass: bool,
}

/// Evaluate the full polynomial battery; each |estimate| < 4 SE is the
/// pass criterion, applied to all three blocks separately.
pub fn generator_battery(
    polys: &[(String, TestFunctionPoly)],
    n_modes: usize,
    phi: &MultiplierOp,
    lambda: f64,
    samples: u64,
    seed: u64,
) -> Result<Vec<BatteryEntry>> {
    let grid = TorusGrid::new(n_modes, 2 * n_modes + 1)?;
    let streams = NoiseStreams::new(seed);
    struct Block {
        per_poly: Vec<[RunningStats; 3]>,
    }
    let zero = || Block {
        per_poly: polys.iter().map(|_| [RunningStats::default(); 3]).collect(),
    };
    let merged = run_blocked(
        samples,
        8192,
        |range| {
            let mut block = zero();
            let mut x = vec![0.0; 2 * n_modes];
            for p in range {
                let field = sample_white_noise(grid, &streams, p);
                for n in 1..=n_modes {
                    let c = field.coeff(n as i64);
                    x[n - 1] = c.re;
                    x[n_modes + n - 1] = c.im;
                }
                let drift = kdv_drift(&x, n_modes, lambda);
                for (pi, (_, f)) in polys.iter().enumerate() {
                    let mut l1 = 0.0;
                    for idx in 0..2 * n_modes {
                        if drift[idx] != 0.0 {
                            l1 += drift[idx] * f.d1(idx, &x);
                        }
                    }
                    let l2 = generator_apply(f, GeneratorPart::Ou, n_modes, phi, lambda, &x);
                    block.per_poly[pi][0].push(l1);
                    block.per_poly[pi][1].push(l2);
                    block.per_poly[pi][2].push(l1 + l2);
                }
            }
            block
        },
        |acc: &mut Block, part| {
            for (a, b) in acc.per_poly.iter_mut().zip(&part.per_poly) {
                for k in 0..3 {
                    a[k].merge(&b[k]);
                }
            }
        },
        zero(),
    );
    Ok(polys
        .iter()
        .zip(&merged.per_poly)
        .map(|((name, _), stats)| {
            let gate = |s: &RunningStats| s.mean().abs() < 4.0 * s.standard_error();
            BatteryEntry {
                name: name.clone(),
                l1_mean: stats[0].mean(),
                l1_se: stats[0].standard_error(),
                l2_mean: stats[1].mean(),
                l2_se: stats[1].standard_error(),
                full_mean: stats[2].mean(),
                full_se: stats[2].standard_error(),
                pass: gate(&stats[0]) && gate(&stats[1]) && gate(&stats[2]),
            }
        })
        .collect())
}

/// Build the coefficient vector of a field in generator variable order.
pub fn field_to_vars(field: &SpectralField) -> Vec<f64> {
    let n = field.n_max();
    let mut x = vec![0.0; 2 * n];
    for mode in 1..=n {
        let c = field.coeff(mode as i64);
        x[mode - 1] = c.re;
        x[n + mode - 1] = c.im;
    }
    x
}
