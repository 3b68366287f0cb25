use serde::Serialize;

use crate::dynamics::{IntegratorConfig, Scheme, Stepper};
use crate::error::{Error, Result};
use crate::noise::{generate_path_noise, NoiseStreams};
use crate::spectral::{MultiplierOp, SpectralField, TorusGrid};
use crate::stats::RunningStats;

use super::ensemble::run_blocked;

/// Ito energy balance of one checkpoint window: the per-path residual
///   r = delta ||u||^2 - int_window (-2 ||u||^2_{H1} + 2 ||phi||^2_{H1}) dt
/// has zero mean, so the observed ensemble drift matches the prediction
/// within Monte Carlo error.
#[derive(Debug, Clone, Serialize)]
pub struct CheckpointStat {
    pub t_start: f64,
    pub t_end: f64,
    /// Ensemble mean of delta ||u||^2 per unit time over the window.
    pub observed_drift: f64,
    /// Time-averaged prediction -2 E||u||^2_{H1} + 2 ||phi||^2_{H1}.
    pub predicted_drift: f64,
    /// Mean window residual in units of its standard error.
    pub residual_z: f64,
    pub residual_mean: f64,
    pub residual_se: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyBalanceReport {
    pub n_max: usize,
    pub dt: f64,
    pub t_end: f64,
    pub paths: u64,
    pub blowups: u64,
    pub phi_h1_sq: f64,
    pub checkpoints: Vec<CheckpointStat>,
    /// Every checkpoint residual within 4 SE of zero.
    pub within_4se: bool,
    /// Ensemble mean of the Ito-integral martingale term, in SE units
    /// (zero-expectation check).
    pub martingale_z: f64,
}

/// Run the energy-balance ensemble: u0 = 0 by default (pass `initial` to
/// override), exponential Euler steps, per-path residual accounting per
/// checkpoint window, and the martingale audit of the stochastic terms.
#[allow(clippy::too_many_arguments)]
pub fn energy_balance(
    grid: TorusGrid,
    phi: &MultiplierOp,
    dt: f64,
    t_end: f64,
    checkpoints: usize,
    paths: u64,
    seed: u64,
    coefficient: f64,
    initial: Option<SpectralField>,
) -> Result<EnergyBalanceReport> {
    if checkpoints == 0 {
        return Err(Error::InvalidParameter("need at least one checkpoint".into()));
    }
    let steps = (t_end / dt).round() as usize;
    if steps % checkpoints != 0 {
        return Err(Error::InvalidParameter(
            "checkpoint count must divide the step count".into(),
        ));
    }
    let window = steps / checkpoints;
    let streams = NoiseStreams::new(seed);
    let phi_h1 = phi.homogeneous_hs_norm(1.0);
    let phi_h1_sq = phi_h1 * phi_h1;
    let n_max = grid.n_max();
    let u0 = initial.unwrap_or_else(|| SpectralField::zero(grid));

    #[derive(Clone)]
    struct Block {
        window_residuals: Vec<RunningStats>,
        window_delta: Vec<RunningStats>,
        window_h1_mean: Vec<RunningStats>,
        martingale: RunningStats,
        blowups: u64,
    }
    let zero_block = |k: usize| Block {
        window_residuals: vec![RunningStats::default(); k],
        window_delta: vec![RunningStats::default(); k],
        window_h1_mean: vec![RunningStats::default(); k],
        martingale: RunningStats::default(),
        blowups: 0,
    };
    let cfg = IntegratorConfig {
        scheme: Scheme::ExponentialEuler,
        ..IntegratorConfig::new(dt, t_end).with_coefficient(coefficient)
    };
    let merged = run_blocked(
        paths,
        64,
        |range| {
            let mut block = zero_block(checkpoints);
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
                let mut martingale = 0.0;
                let mut residuals = vec![0.0; checkpoints];
                let mut deltas = vec![0.0; checkpoints];
                let mut h1_means = vec![0.0; checkpoints];
                let mut h1_prev = {
                    let h = stepper.state().homogeneous_sobolev_norm(1.0);
                    h * h
                };
                let mut l2_window_start = stepper.state().l2_norm_sqr();
                for w in 0..checkpoints {
                    let mut integral = 0.0;
                    for _ in 0..window {
                        let step = stepper.step_index();
                        // Ito integrand uses the pre-step state.
                        for mode in 1..=n_max {
                            let c = stepper.state().coeff(mode as i64);
                            let db = noise.db(step, mode);
                            let nphi = mode as f64 * phi.real_symbol(mode);
                            martingale += 4.0 * nphi * (-c.re * db.im + c.im * db.re);
                        }
                        if stepper.step(&noise).is_err() {
                            block.blowups += 1;
                            continue 'paths;
                        }
                        let h = stepper.state().homogeneous_sobolev_norm(1.0);
                        let h1_new = h * h;
                        // Trapezoid of -2 ||u||^2_{H1} + 2 ||phi||^2_{H1}.
                        integral += dt * (-(h1_prev + h1_new) + 2.0 * phi_h1_sq);
                        h1_prev = h1_new;
                    }
                    let l2_now = stepper.state().l2_norm_sqr();
                    let delta = l2_now - l2_window_start;
                    residuals[w] = delta - integral;
                    deltas[w] = delta;
                    h1_means[w] = (integral - 2.0 * phi_h1_sq * window as f64 * dt)
                        / (-2.0 * window as f64 * dt);
                    l2_window_start = l2_now;
                }
                for w in 0..checkpoints {
                    block.window_residuals[w].push(residuals[w]);
                    block.window_delta[w].push(deltas[w]);
                    block.window_h1_mean[w].push(h1_means[w]);
                }
                block.martingale.push(martingale);
            }
            block
        },
        |acc: &mut Block, part| {
            for (a, b) in acc.window_residuals.iter_mut().zip(&part.window_residuals) {
                a.merge(b);
            }
            for (a, b) in acc.window_delta.iter_mut().zip(&part.window_delta) {
                a.merge(b);
            }
            for (a, b) in acc.window_h1_mean.iter_mut().zip(&part.window_h1_mean) {
                a.merge(b);
            }
            acc.martingale.merge(&part.martingale);
            acc.blowups += part.blowups;
        },
        zero_block(checkpoints),
    );
    let window_t = window as f64 * dt;
    let checkpoints_out: Vec<CheckpointStat> = (0..checkpoints)
        .map(|w| {
            let res = &merged.window_residuals[w];
            let se = res.standard_error();
            CheckpointStat {
                t_start: w as f64 * window_t,
                t_end: (w + 1) as f64 * window_t,
                observed_drift: merged.window_delta[w].mean() / window_t,
                predicted_drift: -2.0 * merged.window_h1_mean[w].mean() + 2.0 * phi_h1_sq,
                residual_z: res.z_score(0.0),
                residual_mean: res.mean(),
                residual_se: se,
            }
        })
        .collect();
    let within_4se = checkpoints_out.iter().all(|c| c.residual_z.abs() <= 4.0);
    Ok(EnergyBalanceReport {
        n_max,
        dt,
        t_end,
        paths,
        blowups: merged.blowups,
        phi_h1_sq,
        checkpoints: checkpoints_out,
        within_4se,
        martingale_z: merged.martingale.z_score(0.0),
    })
}
