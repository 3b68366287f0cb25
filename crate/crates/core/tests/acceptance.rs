//! Acceptance suite: one test per gate, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`). Gates,
//! sizes, and tolerances are pinned here; helpers live next to the tests
//! they serve.

use num_complex::Complex64;
use rayon::prelude::*;

use skdvb_core::dynamics::{integrate_with_noise, IntegratorConfig, Scheme, Stepper};
use skdvb_core::invariance::{
    battery, energy_balance, generator_battery, invariance_refinement, invariance_test, Flow,
    InvarianceOptions,
};
use skdvb_core::mild::{
    calibrate_contraction_constant, linear_part, phi_path_field, picard_solve, stopping_time,
    ContractionConfig, MildProblem,
};
use skdvb_core::noise::{
    generate_path_noise, normal_pair, sample_white_noise, stochastic_convolution_path_refined,
    Domain, LinearKind, NoiseStreams,
};
use skdvb_core::spectral::{MultiplierOp, TorusGrid};
use skdvb_core::stats::{kolmogorov_p_value, ks_statistic, linear_fit};
use skdvb_core::xsb::{
    bilinear_sweep, convolution_integral_check, gain_power_slope, kernel_bound_check,
    sup_sum_check,
};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

/// Criterion 1: Ito energy balance. N = 32, phi_n = 1/n, u0 = 0, T = 1,
/// dt = 1e-4, 1000 paths: ensemble-mean d||u||^2/dt matches
/// -2 E||u||^2_{H1} + 2 ||phi||^2_{H1} within 4 SE at 5 checkpoints.
#[test]
fn criterion_01_energy_balance() {
    let grid = TorusGrid::dealiased(32).unwrap();
    let phi = MultiplierOp::phi_power(1.0, 32).unwrap();
    let out = energy_balance(grid, &phi, 1e-4, 1.0, 5, 1000, 101, -1.0, None).unwrap();
    assert_eq!(out.blowups, 0);
    let worst = out
        .checkpoints
        .iter()
        .map(|c| c.residual_z.abs())
        .fold(0.0f64, f64::max);
    let detail = format!(
        "5 checkpoints, worst |z| = {worst:.2}, martingale z = {:+.2}",
        out.martingale_z
    );
    report(
        "criterion 1 (energy balance)",
        out.within_4se && out.martingale_z.abs() <= 4.0,
        &detail,
    );
}

/// Criterion 2: exact OU invariance. flow = ou, phi = Id, N = 16,
/// T in {0.1, 1, 10}, 1e5 paths: every per-mode variance within 4 SE of 1/2;
/// p-value uniformity over 50 seeds passes KS at 1e-2.
#[test]
fn criterion_02_ou_exact_invariance() {
    let grid = TorusGrid::new(16, 64).unwrap();
    let phi = MultiplierOp::identity(16);
    let mut worst_z: f64 = 0.0;
    for (k, &t) in [0.1, 1.0, 10.0].iter().enumerate() {
        let opts = InvarianceOptions {
            collect_raw: false,
            ..InvarianceOptions::default()
        };
        let rep = invariance_test(Flow::Ou, grid, &phi, t, t, 100_000, 200 + k as u64, &opts)
            .unwrap();
        for m in &rep.modes {
            worst_z = worst_z.max(m.z_var_a.abs()).max(m.z_var_b.abs());
        }
    }
    // Uniformity of the aggregate p-value across independently seeded runs.
    let p_values: Vec<f64> = (0..50u64)
        .into_par_iter()
        .map(|k| {
            let opts = InvarianceOptions {
                collect_raw: false,
                ..InvarianceOptions::default()
            };
            invariance_test(Flow::Ou, grid, &phi, 1.0, 1.0, 100_000, 9000 + k, &opts)
                .unwrap()
                .aggregate_p
        })
        .collect();
    let mut sorted = p_values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let d = ks_statistic(&sorted, |x| x.clamp(0.0, 1.0));
    let ks_p = kolmogorov_p_value(sorted.len(), d);
    let pass = worst_z <= 4.0 && ks_p > 1e-2;
    report(
        "criterion 2 (OU exact invariance)",
        pass,
        &format!("worst variance |z| = {worst_z:.2}, p-value uniformity KS p = {ks_p:.3}"),
    );
}

/// Criterion 3: KdV block conservation and invariance. flow = kdv, N = 8,
/// dt = 1e-3, T = 1: per-path L2 drift < 1e-6 over the whole ensemble;
/// a 1e4-path white-noise test passes the family-wise gate at 1e-3.
#[test]
fn criterion_03_kdv_conservation_and_invariance() {
    let grid = TorusGrid::dealiased(8).unwrap();
    let phi = MultiplierOp::identity(8);
    let paths: u64 = 10_000;
    let streams = NoiseStreams::new(303);
    let max_drift = (0..paths)
        .into_par_iter()
        .map(|p| {
            let u0 = sample_white_noise(grid, &streams, p);
            let l2_0 = u0.l2_norm();
            let cfg = IntegratorConfig::new(1e-3, 1.0);
            let zero_phi = MultiplierOp::zero(8);
            let mut stepper = Stepper::new(u0, &zero_phi, &cfg).unwrap();
            for _ in 0..1000 {
                stepper.step_kdv_only().unwrap();
            }
            (stepper.state().l2_norm() - l2_0).abs()
        })
        .reduce(|| 0.0f64, f64::max);
    let rep = invariance_test(
        Flow::Kdv,
        grid,
        &phi,
        1.0,
        1e-3,
        paths,
        303,
        &InvarianceOptions::default(),
    )
    .unwrap();
    let pass = max_drift < 1e-6 && rep.family_pass;
    report(
        "criterion 3 (KdV conservation + invariance)",
        pass,
        &format!(
            "max per-path L2 drift = {max_drift:.2e}, family gate pass = {}, worst z = {:.2}",
            rep.family_pass, rep.worst_z
        ),
    );
}

/// Criterion 4: full-flow white-noise invariance under dt-refinement.
/// flow = full, phi = Id, N = 8, T = 1, dt in {1e-3, 5e-4, 2.5e-4},
/// 1e4 common paths: extrapolated per-mode moments within 4 SE and
/// aggregate deviations decreasing monotonically in dt.
#[test]
fn criterion_04_full_flow_invariance() {
    let grid = TorusGrid::dealiased(8).unwrap();
    let phi = MultiplierOp::identity(8);
    let rep = invariance_refinement(
        Flow::Full,
        grid,
        &phi,
        1.0,
        &[1e-3, 5e-4, 2.5e-4],
        10_000,
        404,
        &InvarianceOptions::default(),
    )
    .unwrap();
    assert!(rep.blowups == 0, "blowups: {}", rep.blowups);
    let devs: Vec<f64> = rep.levels.iter().map(|l| l.aggregate_deviation).collect();
    let pass = rep.extrapolated_within_4se && rep.monotone;
    report(
        "criterion 4 (full-flow invariance)",
        pass,
        &format!(
            "extrapolated worst z = {:.2}, deviations by dt = {devs:?}, monotone = {}",
            rep.extrapolated_worst_z, rep.monotone
        ),
    );
}

/// Criterion 5: generator pairing. Battery of 20 polynomials, N = 4,
/// 1e6 samples: all |estimates| < 4 SE for the KdV block, the OU block,
/// and their sum separately.
#[test]
fn criterion_05_generator_pairing() {
    let polys = battery(4);
    let phi = MultiplierOp::identity(4);
    let entries = generator_battery(&polys, 4, &phi, -1.0, 1_000_000, 505).unwrap();
    let failures: Vec<&str> = entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| e.name.as_str())
        .collect();
    let worst = entries
        .iter()
        .flat_map(|e| {
            [
                e.l1_mean.abs() / e.l1_se.max(1e-300),
                e.l2_mean.abs() / e.l2_se.max(1e-300),
                e.full_mean.abs() / e.full_se.max(1e-300),
            ]
        })
        .fold(0.0f64, f64::max);
    report(
        "criterion 5 (generator pairing)",
        failures.is_empty(),
        &format!("20 polynomials x 3 blocks, worst |estimate|/SE = {worst:.2}, failures: {failures:?}"),
    );
}

/// Criterion 6: stochastic-convolution law. Per-mode variance of Phi
/// matches the closed form within 4 SE against a fine-step Euler oracle;
/// E||Phi||^2 in the restricted norm grows linearly in T (fit R^2 > 0.99)
/// at s = -0.55, b = 0.45, phi_n = n^{-0.83}.
#[test]
fn criterion_06_stochastic_convolution_law() {
    let n_max = 16;
    let phi = MultiplierOp::phi_power(0.83, n_max).unwrap();
    let grid = TorusGrid::new(n_max, 64).unwrap();
    let streams = NoiseStreams::new(606);
    let dt = 0.3;
    let paths: u64 = 100_000;
    // Exact sampler per-mode variances at one step.
    let sums: Vec<f64> = (0..paths)
        .into_par_iter()
        .fold(
            || vec![0.0f64; n_max],
            |mut acc, p| {
                let noise =
                    generate_path_noise(&streams, p, &phi, dt, 1, LinearKind::Full, 0).unwrap();
                for mode in 1..=n_max {
                    acc[mode - 1] += noise.xi(0, mode).norm_sqr();
                }
                acc
            },
        )
        .reduce(
            || vec![0.0f64; n_max],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let mut worst_z: f64 = 0.0;
    for mode in 1..=n_max {
        let nf = mode as f64;
        let expect = phi.real_symbol(mode).powi(2) * (1.0 - (-2.0 * nf * nf * dt).exp());
        let got = sums[mode - 1] / paths as f64;
        // |xi|^2 is exponential: SE = expect / sqrt(paths).
        let z = (got - expect) / (expect / (paths as f64).sqrt());
        worst_z = worst_z.max(z.abs());
    }
    // Fine-step Euler oracle for the first two modes.
    let substeps = 10_000usize;
    let oracle_paths: u64 = 100_000;
    let mut oracle_ok = true;
    for mode in 1..=2usize {
        let nf = mode as f64;
        let phi_n = phi.real_symbol(mode);
        let mu = LinearKind::Full.mu(nf);
        let sub_dt = dt / substeps as f64;
        let sum: f64 = (0..oracle_paths)
            .into_par_iter()
            .map(|p| {
                let mut rng = streams.cell_rng(p, Domain::Bridge(200), 0, mode);
                let mut acc = Complex64::new(0.0, 0.0);
                let sub_sd = sub_dt.sqrt();
                for k in 0..substeps {
                    let (g0, g1) = normal_pair(&mut rng);
                    let remaining = dt - (k as f64 + 0.5) * sub_dt;
                    acc += (mu * remaining).exp()
                        * Complex64::new(0.0, nf * phi_n)
                        * Complex64::new(g0 * sub_sd, g1 * sub_sd);
                }
                acc.norm_sqr()
            })
            .sum();
        let got = sum / oracle_paths as f64;
        let expect = phi_n * phi_n * (1.0 - (-2.0 * nf * nf * dt).exp());
        let se = expect / (oracle_paths as f64).sqrt();
        let bias_allowance = expect * 2.0 * nf * nf * sub_dt;
        oracle_ok &= (got - expect).abs() <= 4.0 * se + bias_allowance;
    }
    // Linear growth of E ||Phi||^2 in the restricted norm.
    let (s, b) = (-0.55, 0.45);
    let t_values = [0.25, 0.5, 1.0, 2.0];
    let fit_paths: u64 = 1000;
    let mut means = Vec::new();
    for (ti, &t) in t_values.iter().enumerate() {
        let nodes = 256usize;
        let dt_t = t / nodes as f64;
        let total: f64 = (0..fit_paths)
            .into_par_iter()
            .map(|p| {
                let states = stochastic_convolution_path_refined(
                    grid,
                    &phi,
                    dt_t,
                    nodes,
                    &streams,
                    (ti as u64) << 32 | p,
                    0,
                )
                .unwrap();
                let field = phi_path_field(&states, dt_t, 4).unwrap();
                let norm = field.xsb_norm(s, b, None).unwrap();
                norm * norm
            })
            .sum();
        means.push(total / fit_paths as f64);
    }
    let (slope, _, r2) = linear_fit(&t_values, &means);
    let pass = worst_z <= 4.0 && oracle_ok && r2 > 0.99 && slope > 0.0;
    report(
        "criterion 6 (stochastic-convolution law)",
        pass,
        &format!(
            "worst variance |z| = {worst_z:.2}, oracle agreement = {oracle_ok}, growth fit R^2 = {r2:.4}"
        ),
    );
}

fn contraction_setup(n_max: usize) -> (TorusGrid, MildProblem, ContractionConfig, MultiplierOp) {
    let grid = TorusGrid::dealiased(n_max).unwrap();
    let dt = 1.0 / (2.0 * (n_max * n_max) as f64);
    let steps = (0.25 / dt).round() as usize;
    let problem = MildProblem::new(grid, dt, steps, -1.0).unwrap();
    let mut cfg = ContractionConfig::new(-0.55, 0.05).unwrap();
    cfg.tolerance = 1e-10;
    let phi = MultiplierOp::phi_power(0.83, n_max).unwrap();
    (grid, problem, cfg, phi)
}

fn candidate_times(problem: &MildProblem) -> Vec<f64> {
    let mut out = Vec::new();
    let mut steps = 2usize;
    while steps <= problem.steps {
        out.push(steps as f64 * problem.dt);
        steps = (steps as f64 * 1.3).ceil() as usize;
    }
    out
}

/// Criterion 7: contraction at the stopping time. 100 random (white-noise
/// data, Brownian path) draws at N = 16, s = -0.55, eps = 0.05: empirical
/// Lipschitz factor <= 1/2 in at least 95 runs with the calibrated
/// constant, and residuals decay geometrically below 1e-8.
#[test]
fn criterion_07_contraction_at_stopping_time() {
    let (grid, problem, cfg, phi) = contraction_setup(16);
    let cal_problem = MildProblem::new(grid, problem.dt, 32, -1.0).unwrap();
    let calibration = calibrate_contraction_constant(&cal_problem, &cfg, &phi, 100, 707).unwrap();
    let cfg = cfg.with_constant(calibration.c);
    let streams = NoiseStreams::new(708);
    let candidates = candidate_times(&problem);
    let results: Vec<(f64, bool, f64, f64)> = (0..100u64)
        .into_par_iter()
        .map(|draw| {
            let u0 = sample_white_noise(grid, &streams, draw);
            let states = stochastic_convolution_path_refined(
                grid,
                &phi,
                problem.dt,
                problem.steps,
                &streams,
                (1 << 32) | draw,
                0,
            )
            .unwrap();
            let phi_full = phi_path_field(&states, problem.dt, cfg.pad).unwrap();
            let t_omega = stopping_time(&u0, &phi_full, &cfg, &candidates).unwrap();
            let steps_omega = ((t_omega / problem.dt).round() as usize).max(2);
            let solve_problem =
                MildProblem::new(grid, problem.dt, steps_omega, problem.coefficient).unwrap();
            let phi_slice = phi_path_field(&states[..=steps_omega], problem.dt, cfg.pad).unwrap();
            let result = picard_solve(&u0, &phi_slice, &solve_problem, &cfg).unwrap();
            let final_residual = *result.residuals.last().unwrap();
            (
                t_omega,
                result.converged,
                result.contraction_factor,
                final_residual,
            )
        })
        .collect();
    let all_converged = results.iter().all(|r| r.1);
    let below_half = results.iter().filter(|r| r.2 <= 0.5).count();
    let all_below_1e8 = results.iter().all(|r| r.3 < 1e-8);
    let t_min = results.iter().map(|r| r.0).fold(f64::MAX, f64::min);
    let t_max = results.iter().map(|r| r.0).fold(0.0f64, f64::max);
    let positive_times = results.iter().filter(|r| r.0 > 0.0).count();
    let pass = all_converged && below_half >= 95 && all_below_1e8 && positive_times == 100;
    report(
        "criterion 7 (contraction at stopping time)",
        pass,
        &format!(
            "C = {:.3e}, factor <= 1/2 in {below_half}/100, residuals < 1e-8 = {all_below_1e8}, T_omega in [{t_min:.4}, {t_max:.4}]",
            calibration.c
        ),
    );
}

/// Criterion 8: cross-method consistency. Picard mild solution vs the
/// exponential-Euler trajectory on identical Brownian paths at N = 16,
/// T = T_omega / 2: the sup-in-time H^{-0.55} distance decreases under
/// joint (dt, iteration) refinement and ends below 1e-3.
#[test]
fn criterion_08_cross_method_consistency() {
    let (grid, problem, cfg, phi) = contraction_setup(16);
    let cal_problem = MildProblem::new(grid, problem.dt, 32, -1.0).unwrap();
    let calibration = calibrate_contraction_constant(&cal_problem, &cfg, &phi, 60, 808).unwrap();
    let cfg = {
        let mut c = cfg.with_constant(calibration.c);
        c.tolerance = 1e-12;
        c.max_iterations = 200;
        c
    };
    let streams = NoiseStreams::new(809);
    let u0 = sample_white_noise(grid, &streams, 0);
    // Stopping time on the coarse lattice.
    let states = stochastic_convolution_path_refined(
        grid,
        &phi,
        problem.dt,
        problem.steps,
        &streams,
        1,
        2,
    )
    .unwrap();
    let phi_full = phi_path_field(&states, problem.dt, cfg.pad).unwrap();
    let candidates = candidate_times(&problem);
    let t_omega = stopping_time(&u0, &phi_full, &cfg, &candidates).unwrap();
    let steps_half = (((t_omega / 2.0) / problem.dt).round() as usize).max(4);
    // The methods differ by first-order drift quadrature with a stiff
    // dispersive constant; refine until the target is reachable.
    let levels = 9u32;
    let mut distances = Vec::new();
    for level in 0..levels {
        let factor = 1usize << level;
        let dt = problem.dt / factor as f64;
        let steps = steps_half * factor;
        let refine = levels - 1 - level;
        // Shared noise: the mild path sampler and the integrator table use
        // the same cells at matching refinement.
        let phi_states = stochastic_convolution_path_refined(
            grid, &phi, dt, steps, &streams, 1, refine,
        )
        .unwrap();
        let noise =
            generate_path_noise(&streams, 1, &phi, dt, steps, LinearKind::Full, refine).unwrap();
        let solve_problem = MildProblem::new(grid, dt, steps, problem.coefficient).unwrap();
        let phi_lattice = phi_path_field(&phi_states, dt, cfg.pad).unwrap();
        let picard = picard_solve(&u0, &phi_lattice, &solve_problem, &cfg).unwrap();
        assert!(picard.converged);
        let z = linear_part(&u0, &solve_problem, cfg.pad);
        let icfg = IntegratorConfig {
            scheme: Scheme::ExponentialEuler,
            store_states: true,
            record_stride: 1,
            ..IntegratorConfig::new(dt, steps as f64 * dt)
        };
        let traj = integrate_with_noise(u0.clone(), &phi, &icfg, &noise).unwrap();
        let dyn_states = traj.states.as_ref().unwrap();
        let mut sup_dist: f64 = 0.0;
        for j in 0..=steps {
            let mut diff = dyn_states[j].clone();
            for mode in 1..=grid.n_max() {
                let mild_val =
                    picard.solution.value(mode, j) + z.value(mode, j) + phi_lattice.value(mode, j);
                let d = diff.coeff(mode as i64) - mild_val;
                diff.set_coeff(mode, d);
            }
            sup_dist = sup_dist.max(diff.sobolev_norm(-0.55));
        }
        distances.push(sup_dist);
    }
    let decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    let final_dist = *distances.last().unwrap();
    let pass = decreasing && final_dist < 1e-3;
    report(
        "criterion 8 (cross-method consistency)",
        pass,
        &format!("T_omega/2 = {:.4}, distances under refinement = {distances:?}", steps_half as f64 * problem.dt),
    );
}

/// Criterion 9: bilinear-estimate sweep. Max ratio over 1000 random field
/// pairs finite and changing by less than 2x from N = 32 to N = 64 at
/// (s, eps, gamma) = (-0.55, 0.05, 0.05).
#[test]
fn criterion_09_bilinear_sweep() {
    let (s, eps, gamma) = (-0.55, 0.05, 0.05);
    let b = 0.5 - eps;
    let sweep32 = bilinear_sweep(32, 1.0 / 64.0, 64, 4, s, b, gamma, 1.0, 1000, 909).unwrap();
    let sweep64 = bilinear_sweep(64, 1.0 / 64.0, 64, 4, s, b, gamma, 1.0, 1000, 910).unwrap();
    let growth = sweep64.max_ratio / sweep32.max_ratio;
    let pass = sweep32.max_ratio.is_finite()
        && sweep64.max_ratio.is_finite()
        && growth < 2.0
        && growth > 0.5;
    report(
        "criterion 9 (bilinear sweep)",
        pass,
        &format!(
            "max ratio N=32: {:.4e}, N=64: {:.4e}, growth = {growth:.3}",
            sweep32.max_ratio, sweep64.max_ratio
        ),
    );
}

/// Criterion 10: lemma checkers. Kernel bound stable under doubling
/// (128 -> 256, < 5%) at (s, eps) = (-0.5, 0.05); sup-sum stable (< 5%)
/// at delta = 0.6 doubling the truncation from 1e3; convolution-integral
/// bound ratio spread < 10x over a in {0, 10, 100, 1000}; time-gain
/// slopes within 0.1 of 1/2 - b for b in {0.3, 0.4, 0.45}.
#[test]
fn criterion_10_lemma_checkers() {
    let k128 = kernel_bound_check(128, -0.5, 0.05);
    let k256 = kernel_bound_check(256, -0.5, 0.05);
    let kernel_change = (k256.max_ratio - k128.max_ratio).abs() / k128.max_ratio;

    let n_values = [1, 2, 4, 8, 16];
    let s1k = sup_sum_check(0.6, 1000, &n_values, 64);
    let s2k = sup_sum_check(0.6, 2000, &n_values, 64);
    let sup_change = (s2k.max_sum - s1k.max_sum).abs() / s1k.max_sum;

    let ratios: Vec<f64> = [0.0, 10.0, 100.0, 1000.0]
        .iter()
        .map(|&a| {
            convolution_integral_check(0.94, 0.98, a)
                .unwrap()
                .bound_ratio
        })
        .collect();
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max)
        / ratios.iter().cloned().fold(f64::MAX, f64::min);

    let t_values: Vec<f64> = (2..=7).map(|k| 2.0f64.powi(-k)).collect();
    let mut slope_errs = Vec::new();
    for &b in &[0.3, 0.4, 0.45] {
        let slope = gain_power_slope(4, -0.55, b, &t_values, 6, 1010).unwrap();
        slope_errs.push((b, (slope - (0.5 - b)).abs()));
    }
    let slopes_ok = slope_errs.iter().all(|&(_, e)| e < 0.1);

    let pass = kernel_change < 0.05 && sup_change < 0.05 && spread < 10.0 && slopes_ok;
    report(
        "criterion 10 (lemma checkers)",
        pass,
        &format!(
            "kernel change = {kernel_change:.4}, sup-sum change = {sup_change:.4}, bound spread = {spread:.2}, slope errors = {slope_errs:?}"
        ),
    );
}

/// Criterion 11: moment audit. phi_n = 1/n, ||u0|| = 1, N = 16, T = 1,
/// 1000 paths: E sup ||u||^2 bounded by 2||u0||^2 + 2 C(T) ||phi||^2_{H1}
/// with finite reported C(T); higher moments finite and Jensen-consistent.
#[test]
fn criterion_11_moment_audit() {
    let grid = TorusGrid::dealiased(16).unwrap();
    let phi = MultiplierOp::phi_power(1.0, 16).unwrap();
    let streams = NoiseStreams::new(1111);
    let mut u0 = sample_white_noise(grid, &streams, u64::MAX >> 2);
    let norm = u0.l2_norm();
    u0.scale_mut(1.0 / norm);
    let rep = skdvb_core::invariance::moment_growth_audit(
        grid,
        &phi,
        1e-3,
        1.0,
        1000,
        1111,
        -1.0,
        Some(u0),
    )
    .unwrap();
    let (_, m1, _) = rep.sup_moments[0];
    let bound = 2.0 * rep.u0_l2_sq + 2.0 * rep.fitted_c * rep.phi_h1_sq;
    let moments_finite = rep
        .sup_moments
        .iter()
        .all(|(_, m, se)| m.is_finite() && se.is_finite() && *m > 0.0);
    let pass = rep.blowups == 0
        && rep.fitted_c.is_finite()
        && rep.fitted_c > 0.0
        && m1 <= bound + 1e-9 * bound
        && moments_finite
        && rep.jensen_consistent;
    report(
        "criterion 11 (moment audit)",
        pass,
        &format!(
            "E sup ||u||^2 = {m1:.4e} <= {bound:.4e}, C(T) = {:.4e}, Jensen consistent = {}",
            rep.fitted_c, rep.jensen_consistent
        ),
    );
}
