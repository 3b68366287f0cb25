use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{LinearKind, PathNoise};
use crate::spectral::{nonlinearity_into, MultiplierOp, NonlinearityWorkspace, SpectralField};

/// Time stepping schemes for the truncated system.
///
/// The stiff linear part (|mu_n| up to N^2 + N^3) rules out explicit Euler
/// at moderate N; the exponential scheme propagates it exactly in law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// u <- S(dt)[u + dt lambda P_N (u^2)_x] + exact noise increment.
    ExponentialEuler,
    /// Fully explicit; usable only when dt (N^2 + N^3) is small.
    EulerMaruyama,
    /// KdV half-step / exact OU full-step / KdV half-step, mirroring the
    /// generator decomposition block for block.
    StrangSplit,
}

impl Scheme {
    /// Which convolution kernel the noise table must carry.
    pub fn linear_kind(self) -> LinearKind {
        match self {
            Scheme::StrangSplit => LinearKind::Dissipative,
            _ => LinearKind::Full,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    /// Signed coefficient lambda of the quadratic term (u^2)_x.
    pub coefficient: f64,
    /// Record observables every `record_stride` steps.
    pub record_stride: usize,
    /// Keep full coefficient snapshots at the recording stride.
    pub store_states: bool,
    /// Paths whose L^2 norm exceeds this are flagged as blowups.
    pub blowup_ceiling: f64,
    /// Fixed-point tolerance and iteration cap of the midpoint substep.
    pub midpoint_tol: f64,
    pub midpoint_max_iter: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self {
            scheme: Scheme::ExponentialEuler,
            dt,
            t_end,
            coefficient: -1.0,
            record_stride: 1,
            store_states: false,
            blowup_ceiling: 1e6,
            midpoint_tol: 1e-13,
            midpoint_max_iter: 100,
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_coefficient(mut self, coefficient: f64) -> Self {
        self.coefficient = coefficient;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParameter("dt must be positive".into()));
        }
        if self.t_end < 0.0 {
            return Err(Error::InvalidParameter("t_end must be >= 0".into()));
        }
        if self.t_end > 0.0 {
            let steps = self.t_end / self.dt;
            if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "t_end = {} is not an integer number of steps of dt = {}",
                    self.t_end, self.dt
                )));
            }
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

#[derive(Clone, Copy)]
enum PhaseTable {
    Half,
    Quarter,
}

/// Owns the state and scratch buffers of one path's integration.
pub struct Stepper<'a> {
    cfg: &'a IntegratorConfig,
    phi: &'a MultiplierOp,
    u: SpectralField,
    t: f64,
    step_index: usize,
    // Precomputed per-mode multipliers.
    semigroup_dt: Vec<Complex64>,
    ou_decay: Vec<f64>,
    kdv_phase_half: Vec<Complex64>,
    kdv_phase_quarter: Vec<Complex64>,
    mu_full: Vec<Complex64>,
    nl: SpectralField,
    midpoint: SpectralField,
    candidate: SpectralField,
    ws: NonlinearityWorkspace,
}

impl<'a> Stepper<'a> {
    pub fn new(u0: SpectralField, phi: &'a MultiplierOp, cfg: &'a IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        let grid = u0.grid();
        if phi.n_max() != grid.n_max() {
            return Err(Error::GridMismatch {
                expected: grid.n_max(),
                got: phi.n_max(),
            });
        }
        if cfg.coefficient != 0.0 && !grid.supports_quadratic() {
            return Err(Error::Undersampled {
                m: grid.m_phys(),
                n_max: grid.n_max(),
                requirement: "M >= 3N+1 for the quadratic term",
            });
        }
        let n_max = grid.n_max();
        let dt = cfg.dt;
        let semigroup_dt = (1..=n_max)
            .map(|n| (LinearKind::Full.mu(n as f64) * dt).exp())
            .collect();
        let ou_decay = (1..=n_max)
            .map(|n| (-(n as f64) * (n as f64) * dt).exp())
            .collect();
        let phase = |factor: f64| -> Vec<Complex64> {
            (1..=n_max)
                .map(|n| {
                    let nf = n as f64;
                    Complex64::from_polar(1.0, nf * nf * nf * dt * factor)
                })
                .collect()
        };
        let mu_full = (1..=n_max)
            .map(|n| LinearKind::Full.mu(n as f64))
            .collect();
        let ws = NonlinearityWorkspace::new(grid.m_phys());
        Ok(Self {
            cfg,
            phi,
            nl: SpectralField::zero(grid),
            midpoint: SpectralField::zero(grid),
            candidate: SpectralField::zero(grid),
            u: u0,
            t: 0.0,
            step_index: 0,
            semigroup_dt,
            ou_decay,
            kdv_phase_half: phase(0.5),
            kdv_phase_quarter: phase(0.25),
            mu_full,
            ws,
        })
    }

    pub fn state(&self) -> &SpectralField {
        &self.u
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    /// Advance one step, consuming this step's noise from the table.
    pub fn step(&mut self, noise: &PathNoise) -> Result<()> {
        debug_assert_eq!(noise.kind(), self.cfg.scheme.linear_kind());
        debug_assert!((noise.dt() - self.cfg.dt).abs() < 1e-12 * self.cfg.dt);
        match self.cfg.scheme {
            Scheme::ExponentialEuler => self.step_exponential(noise)?,
            Scheme::EulerMaruyama => self.step_euler_maruyama(noise)?,
            Scheme::StrangSplit => {
                self.kdv_substep(0.5, PhaseTable::Quarter)?;
                self.ou_substep(noise);
                self.kdv_substep(0.5, PhaseTable::Quarter)?;
            }
        }
        self.step_index += 1;
        self.t = self.step_index as f64 * self.cfg.dt;
        self.check_blowup()
    }

    fn step_exponential(&mut self, noise: &PathNoise) -> Result<()> {
        let dt = self.cfg.dt;
        self.eval_nonlinearity()?;
        let step = self.step_index;
        for mode in 1..=self.u.n_max() {
            let k = mode - 1;
            let c = self.u.coeffs()[k] + dt * self.nl.coeffs()[k];
            self.u.coeffs_mut()[k] = self.semigroup_dt[k] * c + noise.xi(step, mode);
        }
        Ok(())
    }

    fn step_euler_maruyama(&mut self, noise: &PathNoise) -> Result<()> {
        let dt = self.cfg.dt;
        self.eval_nonlinearity()?;
        let step = self.step_index;
        for mode in 1..=self.u.n_max() {
            let k = mode - 1;
            let c = self.u.coeffs()[k];
            let drift = self.mu_full[k] * c + self.nl.coeffs()[k];
            let gain = Complex64::new(0.0, mode as f64 * self.phi.real_symbol(mode));
            self.u.coeffs_mut()[k] = c + dt * drift + gain * noise.db(step, mode);
        }
        Ok(())
    }

    fn ou_substep(&mut self, noise: &PathNoise) {
        let step = self.step_index;
        for mode in 1..=self.u.n_max() {
            let k = mode - 1;
            self.u.coeffs_mut()[k] = self.ou_decay[k] * self.u.coeffs()[k] + noise.xi(step, mode);
        }
    }

    /// One deterministic KdV step of size `fraction * dt`: exact phase
    /// rotation around an implicit-midpoint quadratic substep. The midpoint
    /// rule moves no L^2 mass, so the block conserves the L^2 norm up to
    /// the fixed-point tolerance.
    fn kdv_substep(&mut self, fraction: f64, table: PhaseTable) -> Result<()> {
        let dt = self.cfg.dt * fraction;
        self.apply_phase(table);
        if self.cfg.coefficient != 0.0 {
            self.midpoint_nonlinear_step(dt)?;
        }
        self.apply_phase(table);
        Ok(())
    }

    /// Full KdV step (phase-rotation halves around the quadratic substep).
    pub fn step_kdv_only(&mut self) -> Result<()> {
        self.kdv_substep(1.0, PhaseTable::Half)?;
        self.step_index += 1;
        self.t = self.step_index as f64 * self.cfg.dt;
        self.check_blowup()
    }

    fn apply_phase(&mut self, table: PhaseTable) {
        let phase = match table {
            PhaseTable::Half => &self.kdv_phase_half,
            PhaseTable::Quarter => &self.kdv_phase_quarter,
        };
        for (c, p) in self.u.coeffs_mut().iter_mut().zip(phase.iter()) {
            *c *= p;
        }
    }

    /// Implicit midpoint for u_t = lambda (u^2)_x alone.
    fn midpoint_nonlinear_step(&mut self, dt: f64) -> Result<()> {
        let lambda = self.cfg.coefficient;
        let scale = self.u.l2_norm().max(1.0);
        // candidate starts at the explicit Euler prediction.
        nonlinearity_into(&self.u, lambda, &mut self.ws, &mut self.nl)?;
        self.candidate.coeffs_mut().copy_from_slice(self.u.coeffs());
        for (c, nl) in self.candidate.coeffs_mut().iter_mut().zip(self.nl.coeffs()) {
            *c += dt * nl;
        }
        let mut residual = f64::INFINITY;
        for _ in 0..self.cfg.midpoint_max_iter {
            for k in 0..self.u.coeffs().len() {
                self.midpoint.coeffs_mut()[k] =
                    0.5 * (self.u.coeffs()[k] + self.candidate.coeffs()[k]);
            }
            nonlinearity_into(&self.midpoint, lambda, &mut self.ws, &mut self.nl)?;
            residual = 0.0;
            for k in 0..self.u.coeffs().len() {
                let next = self.u.coeffs()[k] + dt * self.nl.coeffs()[k];
                residual += (next - self.candidate.coeffs()[k]).norm_sqr();
                self.candidate.coeffs_mut()[k] = next;
            }
            residual = (2.0 * residual).sqrt();
            if residual <= self.cfg.midpoint_tol * scale {
                self.u.coeffs_mut().copy_from_slice(self.candidate.coeffs());
                return Ok(());
            }
        }
        Err(Error::NoConvergence {
            max_iterations: self.cfg.midpoint_max_iter,
            residual,
        })
    }

    fn eval_nonlinearity(&mut self) -> Result<()> {
        if self.cfg.coefficient == 0.0 {
            for c in self.nl.coeffs_mut() {
                *c = Complex64::new(0.0, 0.0);
            }
            return Ok(());
        }
        nonlinearity_into(&self.u, self.cfg.coefficient, &mut self.ws, &mut self.nl)
    }

    fn check_blowup(&self) -> Result<()> {
        let l2 = self.u.l2_norm();
        if !l2.is_finite() || l2 > self.cfg.blowup_ceiling {
            let (mode, magnitude) = self
                .u
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (k + 1, c.norm()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or((0, f64::NAN));
            return Err(Error::Blowup {
                time: self.t,
                mode,
                magnitude,
            });
        }
        Ok(())
    }
}
