use rayon::prelude::*;
use serde::Serialize;

use crate::spectral::SpectralField;

/// Streaming per-mode moment accumulators. The representation is counts and
/// plain sums, so merging two accumulators is componentwise addition:
/// blocked parallel reductions reproduce the sequential result bit for bit
/// when the blocking is fixed.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleStats {
    n_max: usize,
    count: u64,
    blowups: u64,
    sum_a: Vec<f64>,
    sum_b: Vec<f64>,
    sum_a2: Vec<f64>,
    sum_b2: Vec<f64>,
    sum_ab: Vec<f64>,
    sum_a4: Vec<f64>,
    sum_b4: Vec<f64>,
    /// Cross-mode covariance accumulators for a configured index subset:
    /// (i, j, sum a_i a_j, sum b_i b_j).
    cross: Vec<(usize, usize, f64, f64)>,
}

impl EnsembleStats {
    pub fn new(n_max: usize) -> Self {
        Self::with_cross(n_max, &[])
    }

    pub fn with_cross(n_max: usize, pairs: &[(usize, usize)]) -> Self {
        Self {
            n_max,
            count: 0,
            blowups: 0,
            sum_a: vec![0.0; n_max],
            sum_b: vec![0.0; n_max],
            sum_a2: vec![0.0; n_max],
            sum_b2: vec![0.0; n_max],
            sum_ab: vec![0.0; n_max],
            sum_a4: vec![0.0; n_max],
            sum_b4: vec![0.0; n_max],
            cross: pairs.iter().map(|&(i, j)| (i, j, 0.0, 0.0)).collect(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn blowups(&self) -> u64 {
        self.blowups
    }

    pub fn record_blowup(&mut self) {
        self.blowups += 1;
    }

    pub fn accumulate(&mut self, field: &SpectralField) {
        debug_assert_eq!(field.n_max(), self.n_max);
        self.count += 1;
        for n in 1..=self.n_max {
            let c = field.coeff(n as i64);
            let (a, b) = (c.re, c.im);
            let k = n - 1;
            self.sum_a[k] += a;
            self.sum_b[k] += b;
            self.sum_a2[k] += a * a;
            self.sum_b2[k] += b * b;
            self.sum_ab[k] += a * b;
            self.sum_a4[k] += a * a * a * a;
            self.sum_b4[k] += b * b * b * b;
        }
        for entry in &mut self.cross {
            let ci = field.coeff(entry.0 as i64);
            let cj = field.coeff(entry.1 as i64);
            entry.2 += ci.re * cj.re;
            entry.3 += ci.im * cj.im;
        }
    }

    pub fn merge(&mut self, other: &EnsembleStats) {
        assert_eq!(self.n_max, other.n_max);
        assert_eq!(self.cross.len(), other.cross.len());
        self.count += other.count;
        self.blowups += other.blowups;
        for k in 0..self.n_max {
            self.sum_a[k] += other.sum_a[k];
            self.sum_b[k] += other.sum_b[k];
            self.sum_a2[k] += other.sum_a2[k];
            self.sum_b2[k] += other.sum_b2[k];
            self.sum_ab[k] += other.sum_ab[k];
            self.sum_a4[k] += other.sum_a4[k];
            self.sum_b4[k] += other.sum_b4[k];
        }
        for (mine, theirs) in self.cross.iter_mut().zip(&other.cross) {
            debug_assert_eq!((mine.0, mine.1), (theirs.0, theirs.1));
            mine.2 += theirs.2;
            mine.3 += theirs.3;
        }
    }

    pub fn mean_a(&self, n: usize) -> f64 {
        self.sum_a[n - 1] / self.count as f64
    }

    pub fn mean_b(&self, n: usize) -> f64 {
        self.sum_b[n - 1] / self.count as f64
    }

    pub fn mean_a2(&self, n: usize) -> f64 {
        self.sum_a2[n - 1] / self.count as f64
    }

    pub fn mean_b2(&self, n: usize) -> f64 {
        self.sum_b2[n - 1] / self.count as f64
    }

    pub fn mean_ab(&self, n: usize) -> f64 {
        self.sum_ab[n - 1] / self.count as f64
    }

    /// Standard error of the mean of a_n (population estimate).
    pub fn se_mean_a(&self, n: usize) -> f64 {
        let p = self.count as f64;
        let var = (self.mean_a2(n) - self.mean_a(n).powi(2)).max(0.0);
        (var / p).sqrt()
    }

    pub fn se_mean_b(&self, n: usize) -> f64 {
        let p = self.count as f64;
        let var = (self.mean_b2(n) - self.mean_b(n).powi(2)).max(0.0);
        (var / p).sqrt()
    }

    /// Standard error of the mean of a_n^2 (needs the fourth moment).
    pub fn se_mean_a2(&self, n: usize) -> f64 {
        let p = self.count as f64;
        let m2 = self.mean_a2(n);
        let m4 = self.sum_a4[n - 1] / p;
        ((m4 - m2 * m2).max(0.0) / p).sqrt()
    }

    pub fn se_mean_b2(&self, n: usize) -> f64 {
        let p = self.count as f64;
        let m2 = self.mean_b2(n);
        let m4 = self.sum_b4[n - 1] / p;
        ((m4 - m2 * m2).max(0.0) / p).sqrt()
    }

    pub fn cross_pairs(&self) -> &[(usize, usize, f64, f64)] {
        &self.cross
    }
}

/// Run `paths` independent jobs in fixed blocks and merge the per-block
/// results in index order: the reduction is deterministic for any rayon
/// thread count.
pub fn run_blocked<T, F, M>(paths: u64, block: u64, job: F, mut merge: M, mut acc: T) -> T
where
    T: Send,
    F: Fn(std::ops::Range<u64>) -> T + Sync,
    M: FnMut(&mut T, T),
{
    let blocks: Vec<std::ops::Range<u64>> = (0..paths.div_ceil(block))
        .map(|k| (k * block)..((k + 1) * block).min(paths))
        .collect();
    let results: Vec<T> = blocks.into_par_iter().map(&job).collect();
    for r in results {
        merge(&mut acc, r);
    }
    acc
}
