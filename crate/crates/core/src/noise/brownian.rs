use num_complex::Complex64;

use crate::error::{Error, Result};

use super::streams::{normal_pair, Domain, NoiseStreams};

/// Complex Brownian increments per mode on a time grid. Real and imaginary
/// parts of each increment are independent with variance dt each, so
/// E|dB_n|^2 = 2 dt. Increments are independent across modes and steps.
#[derive(Debug, Clone)]
pub struct BrownianPath {
    times: Vec<f64>,
    n_max: usize,
    /// Step-major layout: increments[step * n_max + (mode - 1)].
    increments: Vec<Complex64>,
}

impl BrownianPath {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    /// Increment of B_n over [t_k, t_{k+1}]; mode is 1-based.
    pub fn increment(&self, step: usize, mode: usize) -> Complex64 {
        self.increments[step * self.n_max + mode - 1]
    }

    /// Sum of increments over all steps (B_n(t_K) - B_n(t_0)).
    pub fn total(&self, mode: usize) -> Complex64 {
        (0..self.steps()).map(|k| self.increment(k, mode)).sum()
    }

    /// Split every increment with a Brownian bridge, producing the path on
    /// the halved grid. Paired fine increments sum to the coarse increment
    /// exactly, so refinement studies use coupled paths.
    pub fn refine_bridge(&self, streams: &NoiseStreams, path: u64, level: u8) -> BrownianPath {
        let steps = self.steps();
        let mut times = Vec::with_capacity(2 * steps + 1);
        let mut increments = Vec::with_capacity(2 * steps * self.n_max);
        for k in 0..steps {
            let t0 = self.times[k];
            let t1 = self.times[k + 1];
            times.push(t0);
            times.push(0.5 * (t0 + t1));
            let half_sd = (0.25 * (t1 - t0)).sqrt();
            // First halves for all modes, then second halves.
            let mut firsts = Vec::with_capacity(self.n_max);
            for mode in 1..=self.n_max {
                let whole = self.increment(k, mode);
                let mut rng = streams.cell_rng(path, Domain::Bridge(level), k as u64, mode);
                let (g1, g2) = normal_pair(&mut rng);
                let mid = Complex64::new(g1 * half_sd, g2 * half_sd);
                firsts.push(0.5 * whole + mid);
            }
            increments.extend_from_slice(&firsts);
            for mode in 1..=self.n_max {
                let whole = self.increment(k, mode);
                increments.push(whole - firsts[mode - 1]);
            }
        }
        times.push(self.times[steps]);
        BrownianPath {
            times,
            n_max: self.n_max,
            increments,
        }
    }
}

/// Sample a Brownian path on a strictly increasing grid.
pub fn sample_brownian(
    n_max: usize,
    times: &[f64],
    streams: &NoiseStreams,
    path: u64,
) -> Result<BrownianPath> {
    if times.len() < 2 {
        return Err(Error::InvalidParameter(
            "time grid needs at least two points".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonMonotoneGrid);
    }
    let steps = times.len() - 1;
    let mut increments = Vec::with_capacity(steps * n_max);
    for k in 0..steps {
        let sd = (times[k + 1] - times[k]).sqrt();
        for mode in 1..=n_max {
            let mut rng = streams.cell_rng(path, Domain::Step, k as u64, mode);
            let (g1, g2) = normal_pair(&mut rng);
            increments.push(Complex64::new(g1 * sd, g2 * sd));
        }
    }
    Ok(BrownianPath {
        times: times.to_vec(),
        n_max,
        increments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_grid(t_end: f64, steps: usize) -> Vec<f64> {
        (0..=steps).map(|k| t_end * k as f64 / steps as f64).collect()
    }

    #[test]
    fn rejects_non_monotone() {
        let streams = NoiseStreams::new(0);
        assert!(sample_brownian(2, &[0.0, 0.5, 0.5], &streams, 0).is_err());
        assert!(sample_brownian(2, &[0.0, -0.5], &streams, 0).is_err());
    }

    #[test]
    fn increment_variance_single_step() {
        let streams = NoiseStreams::new(11);
        let dt = 0.37;
        let paths = 100_000;
        let mut sum_re_sq = 0.0;
        for p in 0..paths {
            let b = sample_brownian(1, &[0.0, dt], &streams, p).unwrap();
            let inc = b.increment(0, 1);
            sum_re_sq += inc.re * inc.re;
        }
        let pf = paths as f64;
        let var = sum_re_sq / pf;
        // Var of the variance estimator of N(0, dt): 2 dt^2 / P.
        let se = dt * (2.0 / pf).sqrt();
        assert!((var - dt).abs() < 4.0 * se, "var = {var}, dt = {dt}");
    }

    #[test]
    fn unit_time_second_moment_and_independence() {
        let streams = NoiseStreams::new(12);
        let grid = uniform_grid(1.0, 16);
        let paths = 100_000;
        let mut sum_sq = 0.0;
        let mut cross = 0.0;
        for p in 0..paths {
            let b = sample_brownian(2, &grid, &streams, p).unwrap();
            let b1 = b.total(1);
            let b2 = b.total(2);
            sum_sq += b1.norm_sqr();
            cross += b1.re * b2.re;
        }
        let pf = paths as f64;
        // E|B_n(1)|^2 = 2; estimator variance = Var(|B|^2)/P = 4/P.
        assert!((sum_sq / pf - 2.0).abs() < 4.0 * (4.0f64 / pf).sqrt());
        // Sample correlation between modes: SE = 1/sqrt(P).
        assert!((cross / pf).abs() < 4.0 / pf.sqrt());
    }

    #[test]
    fn bridge_refinement_is_consistent() {
        let streams = NoiseStreams::new(5);
        let grid = uniform_grid(2.0, 8);
        let coarse = sample_brownian(3, &grid, &streams, 9).unwrap();
        let fine = coarse.refine_bridge(&streams, 9, 0);
        assert_eq!(fine.steps(), 2 * coarse.steps());
        for k in 0..coarse.steps() {
            for mode in 1..=3 {
                let sum = fine.increment(2 * k, mode) + fine.increment(2 * k + 1, mode);
                assert!((sum - coarse.increment(k, mode)).norm() < 1e-14);
            }
        }
        // Halved grid keeps the original nodes.
        for k in 0..=coarse.steps() {
            assert!((fine.times()[2 * k] - coarse.times()[k]).abs() < 1e-15);
        }
    }
}
