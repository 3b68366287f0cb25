use crate::error::Result;
use crate::noise::{generate_path_noise, NoiseStreams, PathNoise};
use crate::spectral::{MultiplierOp, SpectralField};

use super::stepper::{IntegratorConfig, Stepper};

/// Observable series recorded along a trajectory.
#[derive(Debug, Clone, Default)]
pub struct Observables {
    pub l2: Vec<f64>,
    pub h1_dot: Vec<f64>,
}

/// Recorded output of one path.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Recording times (stride multiples of dt, always including 0 and T).
    pub times: Vec<f64>,
    pub observables: Observables,
    /// Coefficient snapshots at the recording times (when requested).
    pub states: Option<Vec<SpectralField>>,
}

impl Trajectory {
    fn record(&mut self, t: f64, u: &SpectralField, store_states: bool) {
        self.times.push(t);
        self.observables.l2.push(u.l2_norm());
        self.observables.h1_dot.push(u.homogeneous_sobolev_norm(1.0));
        if store_states {
            self.states.as_mut().unwrap().push(u.clone());
        }
    }
}

/// Integrate one path of the truncated system. Deterministic given
/// (streams, path). Noise is drawn at the scheme's kernel; pass a zero phi
/// to run the deterministic flow.
pub fn integrate(
    u0: SpectralField,
    phi: &MultiplierOp,
    cfg: &IntegratorConfig,
    streams: &NoiseStreams,
    path: u64,
) -> Result<Trajectory> {
    cfg.validate()?;
    let steps = cfg.steps();
    let noise = if phi.is_zero() {
        PathNoise::silent(phi.n_max(), cfg.dt, steps, cfg.scheme.linear_kind())
    } else {
        generate_path_noise(
            streams,
            path,
            phi,
            cfg.dt,
            steps,
            cfg.scheme.linear_kind(),
            0,
        )?
    };
    integrate_with_noise(u0, phi, cfg, &noise)
}

/// Integrate against a caller-supplied noise table (used for coupled
/// refinement studies and cross-method comparisons).
pub fn integrate_with_noise(
    u0: SpectralField,
    phi: &MultiplierOp,
    cfg: &IntegratorConfig,
    noise: &PathNoise,
) -> Result<Trajectory> {
    let mut stepper = Stepper::new(u0, phi, cfg)?;
    let steps = cfg.steps();
    let mut traj = Trajectory {
        times: Vec::new(),
        observables: Observables::default(),
        states: cfg.store_states.then(Vec::new),
    };
    traj.record(0.0, stepper.state(), cfg.store_states);
    for k in 0..steps {
        stepper.step(noise)?;
        if (k + 1) % cfg.record_stride.max(1) == 0 || k + 1 == steps {
            traj.record(stepper.time(), stepper.state(), cfg.store_states);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::sample_white_noise_seeded;
    use crate::spectral::{MultiplierOp, TorusGrid};
    use num_complex::Complex64;

    fn zero_phi(n: usize) -> MultiplierOp {
        MultiplierOp::zero(n)
    }

    #[test]
    fn zero_horizon_returns_initial_state_only() {
        let grid = TorusGrid::dealiased(8).unwrap();
        let u0 = sample_white_noise_seeded(grid, 1);
        let cfg = IntegratorConfig::new(0.01, 0.0);
        let traj = integrate(u0.clone(), &zero_phi(8), &cfg, &NoiseStreams::new(0), 0).unwrap();
        assert_eq!(traj.times, vec![0.0]);
        assert!((traj.observables.l2[0] - u0.l2_norm()).abs() < 1e-15);
    }

    #[test]
    fn pure_semigroup_single_mode() {
        // phi = 0, nonlinearity off, c_1 = 1, dt = 0.1: c_1 -> e^{-0.1 + 0.1 i}.
        let grid = TorusGrid::dealiased(4).unwrap();
        let mut u0 = SpectralField::zero(grid);
        u0.set_coeff(1, Complex64::new(1.0, 0.0));
        let cfg = IntegratorConfig::new(0.1, 0.1).with_coefficient(0.0);
        let traj = integrate(u0, &zero_phi(4), &cfg, &NoiseStreams::new(0), 0);
        let traj = traj.unwrap();
        assert_eq!(traj.times.len(), 2);
        let expected = Complex64::new(-0.1, 0.1).exp();
        // Reconstruct c_1 from the recorded norms is not enough; store states.
        let cfg = IntegratorConfig {
            store_states: true,
            ..IntegratorConfig::new(0.1, 0.1).with_coefficient(0.0)
        };
        let grid = TorusGrid::dealiased(4).unwrap();
        let mut u0 = SpectralField::zero(grid);
        u0.set_coeff(1, Complex64::new(1.0, 0.0));
        let traj = integrate(u0, &zero_phi(4), &cfg, &NoiseStreams::new(0), 0).unwrap();
        let final_state = &traj.states.as_ref().unwrap()[1];
        assert!((final_state.coeff(1) - expected).norm() < 1e-14);
    }

    #[test]
    fn linear_flow_matches_semigroup_exactly() {
        // Nonlinearity and noise off: u(T) = S(T) u0 to 1e-12.
        let grid = TorusGrid::dealiased(16).unwrap();
        let u0 = sample_white_noise_seeded(grid, 5);
        let cfg = IntegratorConfig {
            store_states: true,
            record_stride: usize::MAX,
            ..IntegratorConfig::new(1.0 / 128.0, 1.0).with_coefficient(0.0)
        };
        let traj = integrate(u0.clone(), &zero_phi(16), &cfg, &NoiseStreams::new(0), 0).unwrap();
        let got = traj.states.as_ref().unwrap().last().unwrap();
        let expect = MultiplierOp::semigroup(1.0, 16).apply(&u0).unwrap();
        for n in 1..=16 {
            assert!(
                (got.coeff(n as i64) - expect.coeff(n as i64)).norm() < 1e-12,
                "mode {n}"
            );
        }
    }

    #[test]
    fn deterministic_dissipative_flow_decreases_l2() {
        // Noise off, nonlinearity on: d/dt ||u||^2 = -2||u||_{H1}^2 <= 0.
        let grid = TorusGrid::dealiased(32).unwrap();
        let mut u0 = sample_white_noise_seeded(grid, 7);
        u0.scale_mut(0.5);
        let cfg = IntegratorConfig::new(1e-3, 1.0);
        let traj = integrate(u0, &zero_phi(32), &cfg, &NoiseStreams::new(0), 0).unwrap();
        for w in traj.observables.l2.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn kdv_split_conserves_l2() {
        let grid = TorusGrid::dealiased(8).unwrap();
        let u0 = sample_white_noise_seeded(grid, 11);
        let l2_0 = u0.l2_norm();
        let cfg = IntegratorConfig::new(1e-3, 1.0);
        let phi = zero_phi(8);
        let mut stepper = Stepper::new(u0, &phi, &cfg).unwrap();
        for _ in 0..1000 {
            stepper.step_kdv_only().unwrap();
        }
        let drift = (stepper.state().l2_norm() - l2_0).abs();
        assert!(drift < 1e-6, "L2 drift {drift:.3e}");
    }

    #[test]
    fn kdv_phase_only_preserves_mode_magnitudes() {
        let grid = TorusGrid::dealiased(8).unwrap();
        let u0 = sample_white_noise_seeded(grid, 13);
        let mags: Vec<f64> = (1..=8).map(|n| u0.coeff(n).norm()).collect();
        let cfg = IntegratorConfig::new(1e-2, 1.0).with_coefficient(0.0);
        let phi = zero_phi(8);
        let mut stepper = Stepper::new(u0, &phi, &cfg).unwrap();
        for _ in 0..100 {
            stepper.step_kdv_only().unwrap();
        }
        for n in 1..=8usize {
            assert!(
                (stepper.state().coeff(n as i64).norm() - mags[n - 1]).abs() < 1e-13,
                "mode {n}"
            );
        }
    }

    #[test]
    fn strong_self_convergence_order_at_least_half() {
        // Coupled-path refinement: error vs the dt/2 solution decays with
        // observed order >= 0.5 in dt.
        let n_max = 16;
        let grid = TorusGrid::dealiased(n_max).unwrap();
        let phi = MultiplierOp::phi_power(1.0, n_max).unwrap();
        let streams = NoiseStreams::new(21);
        let u0 = sample_white_noise_seeded(grid, 3);
        let t_end = 1.0;
        let finest_level = 3u32;
        let base_dt = 1.0 / 64.0;
        let mut errors = Vec::new();
        for level in 0..finest_level {
            let dt_c = base_dt / (1 << level) as f64;
            let steps_c = (t_end / dt_c).round() as usize;
            let noise_c = generate_path_noise(
                &streams,
                0,
                &phi,
                dt_c,
                steps_c,
                crate::noise::LinearKind::Full,
                finest_level - level,
            )
            .unwrap();
            let noise_f = generate_path_noise(
                &streams,
                0,
                &phi,
                dt_c / 2.0,
                steps_c * 2,
                crate::noise::LinearKind::Full,
                finest_level - level - 1,
            )
            .unwrap();
            let cfg_c = IntegratorConfig {
                store_states: true,
                record_stride: usize::MAX,
                ..IntegratorConfig::new(dt_c, t_end)
            };
            let cfg_f = IntegratorConfig {
                store_states: true,
                record_stride: usize::MAX,
                ..IntegratorConfig::new(dt_c / 2.0, t_end)
            };
            let coarse = integrate_with_noise(u0.clone(), &phi, &cfg_c, &noise_c).unwrap();
            let fine = integrate_with_noise(u0.clone(), &phi, &cfg_f, &noise_f).unwrap();
            let uc = coarse.states.as_ref().unwrap().last().unwrap();
            let uf = fine.states.as_ref().unwrap().last().unwrap();
            let mut diff = uc.clone();
            diff.axpy_mut(-1.0, uf).unwrap();
            errors.push(diff.l2_norm());
        }
        // Fit order over the three dyadic levels.
        let xs: Vec<f64> = (0..errors.len())
            .map(|k| (base_dt / (1 << k) as f64).ln())
            .collect();
        let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
        let (slope, _, _) = crate::stats::linear_fit(&xs, &ys);
        assert!(slope >= 0.5, "observed order {slope:.3} (errors {errors:?})");
    }
}
