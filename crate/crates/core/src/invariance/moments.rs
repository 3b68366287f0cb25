use serde::Serialize;

use crate::dynamics::{IntegratorConfig, Scheme, Stepper};
use crate::error::Result;
use crate::noise::{generate_path_noise, NoiseStreams};
use crate::spectral::{MultiplierOp, SpectralField, TorusGrid};
use crate::stats::RunningStats;

use super::ensemble::run_blocked;

/// Moment estimates of the running supremum of ||u||^2.
#[derive(Debug, Clone, Serialize)]
pub struct MomentAuditReport {
    pub n_max: usize,
    pub t_end: f64,
    pub dt: f64,
    pub paths: u64,
    pub blowups: u64,
    pub u0_l2_sq: f64,
    pub phi_h1_sq: f64,
    /// E[sup_{t<=T} ||u||^{2p}] with standard errors, p = 1, 2, 3.
    pub sup_moments: Vec<(u32, f64, f64)>,
    /// Fitted constant in E sup ||u||^2 <= 2||u0||^2 + 2 C(T) ||phi||^2_{H1}.
    pub fitted_c: f64,
    /// Jensen consistency within noise: E[sup^2] >= (E sup)^2, etc.
    pub jensen_consistent: bool,
}

/// Estimate E[sup_t ||u||^{2p}] for p = 1, 2, 3 along the full flow and fit
/// the growth constant of the second-moment bound.
#[allow(clippy::too_many_arguments)]
pub fn moment_growth_audit(
    grid: TorusGrid,
    phi: &MultiplierOp,
    dt: f64,
    t_end: f64,
    paths: u64,
    seed: u64,
    coefficient: f64,
    initial: Option<SpectralField>,
) -> Result<MomentAuditReport> {
    let steps = (t_end / dt).round() as usize;
    let streams = NoiseStreams::new(seed);
    let u0 = initial.unwrap_or_else(|| SpectralField::zero(grid));
    let u0_l2_sq = u0.l2_norm_sqr();
    let phi_h1 = phi.homogeneous_hs_norm(1.0);
    let cfg = IntegratorConfig {
        scheme: Scheme::ExponentialEuler,
        ..IntegratorConfig::new(dt, t_end).with_coefficient(coefficient)
    };
    #[derive(Clone)]
    struct Block {
        p1: RunningStats,
        p2: RunningStats,
        p3: RunningStats,
        blowups: u64,
    }
    let zero = || Block {
        p1: RunningStats::default(),
        p2: RunningStats::default(),
        p3: RunningStats::default(),
        blowups: 0,
    };
    let merged = run_blocked(
        paths,
        64,
        |range| {
            let mut block = zero();
            'paths: for p in range {
                let noise = match generate_path_noise(
                    &streams,
                    p,
                    phi,
                    dt,
                    steps,
                    Scheme::ExponentialEuler.linear_kind(),
                    0,
                ) {
                    Ok(n) => n,
                    Err(_) => {
                        block.blowups += 1;
                        continue;
                    }
                };
                let mut stepper = match Stepper::new(u0.clone(), phi, &cfg) {
                    Ok(s) => s,
                    Err(_) => {
                        block.blowups += 1;
                        continue;
                    }
                };
                let mut sup = stepper.state().l2_norm_sqr();
                for _ in 0..steps {
                    if stepper.step(&noise).is_err() {
                        block.blowups += 1;
                        continue 'paths;
                    }
                    sup = sup.max(stepper.state().l2_norm_sqr());
                }
                block.p1.push(sup);
                block.p2.push(sup * sup);
                block.p3.push(sup * sup * sup);
            }
            block
        },
        |acc: &mut Block, part| {
            acc.p1.merge(&part.p1);
            acc.p2.merge(&part.p2);
            acc.p3.merge(&part.p3);
            acc.blowups += part.blowups;
        },
        zero(),
    );
    let sup_moments = vec![
        (1u32, merged.p1.mean(), merged.p1.standard_error()),
        (2u32, merged.p2.mean(), merged.p2.standard_error()),
        (3u32, merged.p3.mean(), merged.p3.standard_error()),
    ];
    let fitted_c = if phi_h1 > 0.0 {
        (merged.p1.mean() - 2.0 * u0_l2_sq).max(0.0) / (2.0 * phi_h1 * phi_h1)
    } else {
        0.0
    };
    // Jensen: E[sup^2] >= (E sup)^2 and E[sup^3] >= (E sup)^3, allowing the
    // estimators' noise.
    let m1 = merged.p1.mean();
    let tol2 = 4.0 * (merged.p2.standard_error() + 2.0 * m1.abs() * merged.p1.standard_error());
    let tol3 = 4.0
        * (merged.p3.standard_error() + 3.0 * m1 * m1 * merged.p1.standard_error());
    let jensen_consistent =
        merged.p2.mean() >= m1 * m1 - tol2 && merged.p3.mean() >= m1 * m1 * m1 - tol3;
    Ok(MomentAuditReport {
        n_max: grid.n_max(),
        t_end,
        dt,
        paths,
        blowups: merged.blowups,
        u0_l2_sq,
        phi_h1_sq: phi_h1 * phi_h1,
        sup_moments,
        fitted_c,
        jensen_consistent,
    })
}
