//! Thin wrapper over rustfft with a per-thread plan cache.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<PlanCache> = RefCell::new(PlanCache::default());
}

#[derive(Default)]
struct PlanCache {
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
    planner: Option<FftPlanner<f64>>,
}

impl PlanCache {
    fn forward(&mut self, len: usize) -> Arc<dyn Fft<f64>> {
        let planner = self.planner.get_or_insert_with(FftPlanner::new);
        self.forward
            .entry(len)
            .or_insert_with(|| planner.plan_fft_forward(len))
            .clone()
    }

    fn inverse(&mut self, len: usize) -> Arc<dyn Fft<f64>> {
        let planner = self.planner.get_or_insert_with(FftPlanner::new);
        self.inverse
            .entry(len)
            .or_insert_with(|| planner.plan_fft_inverse(len))
            .clone()
    }
}

/// In-place forward DFT, unnormalized: X_k = sum_j x_j e^{-2 pi i jk/L}.
pub fn forward(buf: &mut [Complex64]) {
    let plan = PLANS.with(|p| p.borrow_mut().forward(buf.len()));
    plan.process(buf);
}

/// In-place inverse DFT, unnormalized: x_j = sum_k X_k e^{+2 pi i jk/L}.
pub fn inverse(buf: &mut [Complex64]) {
    let plan = PLANS.with(|p| p.borrow_mut().inverse(buf.len()));
    plan.process(buf);
}

/// Smallest power of two >= n. FFT sizes are kept at powers of two so the
/// transform cost stays predictable across grid choices.
pub fn next_fft_len(n: usize) -> usize {
    n.next_power_of_two()
}
