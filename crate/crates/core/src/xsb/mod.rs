//! Discrete X^{s,b} norms with the dissipative weight
//! <i(tau - n^3) + n^2>, bilinear-estimate sweeps, and numeric verifiers for
//! the supporting calculus inequalities.

mod bilinear;
mod field;
mod lemmas;

pub use bilinear::{bilinear_ratio, bilinear_sweep, gain_power_slope, BilinearSweep};
pub use field::SpaceTimeField;
pub use lemmas::{
    convolution_integral_check, kernel_bound_check, kernel_ratio, sup_sum_check,
    ConvolutionIntegralReport, KernelBoundReport, SupSumReport,
};
