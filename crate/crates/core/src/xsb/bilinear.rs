use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::stats::linear_fit;

use super::field::SpaceTimeField;

/// ||(uv)_x||_{X^{s,-1/2+gamma}_T} / (||u||_{X^{s,b}_T} ||v||_{X^{s,b}_T}),
/// with the product computed by exact discrete convolution in (n, tau) and
/// the restricted norms via the chi_{[0,T]} surrogate.
pub fn bilinear_ratio(
    u: &SpaceTimeField,
    v: &SpaceTimeField,
    s: f64,
    b: f64,
    gamma: f64,
    t: f64,
) -> Result<f64> {
    let uc = u.cutoff(t)?;
    let vc = v.cutoff(t)?;
    let den_u = uc.xsb_norm(s, b, None)?;
    let den_v = vc.xsb_norm(s, b, None)?;
    if den_u == 0.0 || den_v == 0.0 {
        return Err(Error::InvalidParameter(
            "bilinear ratio needs nonzero factors".into(),
        ));
    }
    // chi (uv) = (chi u)(chi v), so no further cutoff on the product.
    let mut prod = uc.product(&vc)?;
    prod.apply_spatial_derivative();
    let num = prod.xsb_norm(s, -0.5 + gamma, None)?;
    Ok(num / (den_u * den_v))
}

/// Result of a random-field ratio sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BilinearSweep {
    pub n_max: usize,
    pub samples: usize,
    pub s: f64,
    pub b: f64,
    pub gamma: f64,
    pub t: f64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub ratios: Vec<f64>,
}

/// Max and mean of the bilinear ratio over random Gaussian-coefficient
/// field pairs, concentrated along the dispersive curve (see
/// [`SpaceTimeField::random_dispersive`]). Deterministic given the seed.
pub fn bilinear_sweep(
    n_max: usize,
    dt: f64,
    j_len: usize,
    pad: usize,
    s: f64,
    b: f64,
    gamma: f64,
    t: f64,
    samples: usize,
    seed: u64,
) -> Result<BilinearSweep> {
    let mut max_ratio: f64 = 0.0;
    let mut sum = 0.0;
    let mut ratios = Vec::with_capacity(samples);
    for k in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e3779b97f4a7c15));
        let u = SpaceTimeField::random_dispersive(n_max, dt, j_len, pad, 3, &mut rng);
        let v = SpaceTimeField::random_dispersive(n_max, dt, j_len, pad, 3, &mut rng);
        let r = bilinear_ratio(&u, &v, s, b, gamma, t)?;
        max_ratio = max_ratio.max(r);
        sum += r;
        ratios.push(r);
    }
    Ok(BilinearSweep {
        n_max,
        samples,
        s,
        b,
        gamma,
        t,
        max_ratio,
        mean_ratio: sum / samples as f64,
        ratios,
    })
}

/// Log-log slope of ||u||_{X^{s,b}_T} / ||u||_{X^{s,1/2}_T} against T,
/// averaged over random smooth-in-time fields. The restricted norm gains
/// T^{1/2-b-} relative to the b = 1/2 norm as T -> 0.
pub fn gain_power_slope(
    n_max: usize,
    s: f64,
    b: f64,
    t_values: &[f64],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    assert!(t_values.len() >= 2);
    let t_max = t_values.iter().cloned().fold(0.0, f64::max);
    // Window covers the largest cutoff; resolution covers the smallest.
    let t_min = t_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let j_len = ((t_max / t_min).ceil() as usize * 32).next_power_of_two();
    let dt = t_max / j_len as f64;
    let mut log_t = Vec::new();
    let mut log_ratio = Vec::new();
    for (k, &t) in t_values.iter().enumerate() {
        let mut ratio_acc = 0.0;
        for sample in 0..samples {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed ^ ((sample * t_values.len() + k) as u64).wrapping_mul(0x2545f4914f6cdd1d),
            );
            let u = SpaceTimeField::random_smooth(n_max, dt, j_len, 4, 3, &mut rng);
            let num = u.xsb_norm(s, b, Some(t))?;
            let den = u.xsb_norm(s, 0.5, Some(t))?;
            ratio_acc += (num / den).ln();
        }
        log_t.push(t.ln());
        log_ratio.push(ratio_acc / samples as f64);
    }
    let (slope, _, _) = linear_fit(&log_t, &log_ratio);
    Ok(slope)
}
