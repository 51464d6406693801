//! The bi-level alternation: equilibrium solve, element gains, knapsack
//! selection under a shrinking volume budget.

use std::fmt;
use std::time::Instant;

use thiserror::Error;

use crate::fem::{
    compliance, element_energies, stored_energies, strain_energy, Displacement, EquilibriumSolver, FemError,
    StructuralModel,
};
use crate::knapsack::{self, BinaryDensity, KnapsackError, KnapsackInstance, KnapsackParams};

/// How an element's knapsack gain is computed from the current displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainMeasure {
    /// Energy the element currently stores, `½ E_e(ρ) u_eᵀ K_e u_e`. Void
    /// elements then carry almost no gain, which keeps the alternation stable.
    #[default]
    Stored,
    /// Energy the element would store at full modulus, `½ E u_eᵀ K_e u_e`.
    /// Void elements in low-stiffness regions see huge displacements and
    /// hence huge gains, so the selection can oscillate.
    FullModulus,
}

impl GainMeasure {
    pub fn gains(self, model: &StructuralModel, rho: &[f64], u: &Displacement) -> Vec<f64> {
        match self {
            GainMeasure::Stored => stored_energies(model, rho, 1.0, u),
            GainMeasure::FullModulus => element_energies(model, u),
        }
    }
}

impl std::str::FromStr for GainMeasure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stored" => Ok(GainMeasure::Stored),
            "full" | "full-modulus" => Ok(GainMeasure::FullModulus),
            other => Err(format!("unknown gain measure `{other}` (expected stored or full)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdtConfig {
    /// Target volume fraction `V_c / V₀`.
    pub volfrac: f64,
    /// Volume reduction rate per outer step.
    pub mu: f64,
    pub tau0: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Initial β; `None` picks `max(1, 10 · max w)` at every step.
    pub beta0: Option<f64>,
    pub max_beta_doublings: u32,
    /// Ramp perturbation relative to `max w` on degenerate steps.
    pub perturb_scale: f64,
    pub gain: GainMeasure,
}

impl Default for CdtConfig {
    fn default() -> Self {
        Self {
            volfrac: 0.5,
            mu: 0.975,
            tau0: 1.0,
            omega1: 2e-16,
            omega2: 1e-2,
            max_outer: 2000,
            max_inner: 1000,
            beta0: None,
            max_beta_doublings: 20,
            perturb_scale: 1e-8,
            gain: GainMeasure::Stored,
        }
    }
}

impl CdtConfig {
    pub fn new(volfrac: f64, mu: f64) -> Result<Self, DriverError> {
        let c = Self { volfrac, mu, ..Default::default() };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), DriverError> {
        validate_schedule(self.volfrac, self.mu, self.omega2, self.max_outer)?;
        if !(self.tau0 >= 0.0 && self.tau0.is_finite()) {
            return Err(DriverError::Config(format!("tau0 = {} must be nonnegative", self.tau0)));
        }
        if !(self.omega1 > 0.0) || self.max_inner == 0 {
            return Err(DriverError::Config("omega1 and max_inner must be positive".into()));
        }
        if let Some(b) = self.beta0.filter(|b| !(*b > 0.0)) {
            return Err(DriverError::Config(format!("beta = {b} must be positive")));
        }
        Ok(())
    }

    fn knapsack_params(&self, tau0: f64) -> KnapsackParams {
        KnapsackParams {
            tau0,
            omega1: self.omega1,
            max_iters: self.max_inner,
            beta0: self.beta0,
            max_doublings: self.max_beta_doublings,
            perturb: true,
            perturb_scale: self.perturb_scale,
            ..Default::default()
        }
    }
}

pub(crate) fn validate_schedule(volfrac: f64, mu: f64, omega2: f64, max_outer: usize) -> Result<(), DriverError> {
    if !(volfrac > 0.0 && volfrac <= 1.0) {
        return Err(DriverError::Config(format!("volfrac = {volfrac} must lie in (0, 1]")));
    }
    if !(mu > 0.0 && mu < 1.0) || (volfrac < 1.0 && mu <= volfrac) {
        return Err(DriverError::Config(format!("mu = {mu} must lie in (volfrac, 1)")));
    }
    if !(omega2 > 0.0) || max_outer == 0 {
        return Err(DriverError::Config("omega2 and max_outer must be positive".into()));
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("finite-element failure at outer step {gamma}: {source}")]
    Fem { gamma: usize, source: FemError },
    #[error("knapsack failure at outer step {gamma}: {source}")]
    Knapsack { gamma: usize, source: KnapsackError },
    #[error("no convergence within {max_outer} outer steps")]
    MaxOuterExceeded { max_outer: usize, record: Box<RunRecord> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cdt,
    Beso,
    Simp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Cdt => "cdt",
            Method::Beso => "beso",
            Method::Simp => "simp",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cdt" => Ok(Method::Cdt),
            "beso" => Ok(Method::Beso),
            "simp" => Ok(Method::Simp),
            other => Err(format!("unknown method `{other}` (expected cdt, beso or simp)")),
        }
    }
}

/// One outer step. Compliance and strain energy refer to the design
/// accepted at this step.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationLog {
    pub gamma: usize,
    pub volume_target: f64,
    pub volume: f64,
    pub inner_iters: usize,
    pub compliance: f64,
    pub strain_energy: f64,
    /// `−w^γᵀρ^γ` for the binary methods.
    pub p_u: Option<f64>,
    /// `P^d_β` at the accepted dual point (CDT only).
    pub p_dual: Option<f64>,
    pub tau_start: Option<f64>,
    pub tau: Option<f64>,
    pub beta: Option<f64>,
    /// Knapsack step needed tie-breaking or a budget snap.
    pub perturbed: bool,
    /// Elements whose density changed in this step.
    pub changed: usize,
    /// Time spent selecting the design (knapsack or OC update).
    pub select_ms: f64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub method: Method,
    pub entries: Vec<IterationLog>,
    pub converged: bool,
}

impl RunRecord {
    pub fn new(method: Method) -> Self {
        Self { method, entries: Vec::new(), converged: false }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> Option<&IterationLog> {
        self.entries.last()
    }
}

/// Result of a binary-density run (CDT or BESO).
#[derive(Debug, Clone)]
pub struct BinaryRun {
    pub density: BinaryDensity,
    pub displacement: Displacement,
    pub record: RunRecord,
    pub compliance: f64,
    pub strain_energy: f64,
    pub relative_residual: f64,
}

impl BinaryRun {
    pub fn volume(&self, model: &StructuralModel) -> f64 {
        self.density.volume(&model.mesh().volumes())
    }
}

/// `max(V_c, μ V_prev)`.
pub fn volume_schedule(v_prev: f64, mu: f64, v_c: f64) -> f64 {
    v_c.max(mu * v_prev)
}

/// Upper-level objective `fᵀu − wᵀρ`.
pub fn primal_upper_objective(rho: &[f64], w: &[f64], u: &Displacement, f: &[f64]) -> f64 {
    let fu: f64 = u.u.iter().zip(f).map(|(a, b)| a * b).sum();
    let wr: f64 = w.iter().zip(rho).map(|(a, b)| a * b).sum();
    fu - wr
}

pub(crate) struct Schedule {
    pub method: Method,
    pub volfrac: f64,
    pub mu: f64,
    pub omega2: f64,
    pub max_outer: usize,
    pub gain: GainMeasure,
}

pub(crate) struct StepChoice {
    pub density: BinaryDensity,
    pub inner_iters: usize,
    pub p_dual: Option<f64>,
    pub tau: Option<f64>,
    pub beta: Option<f64>,
    pub perturbed: bool,
}

/// Shared outer loop of the binary methods: `select(w, instance, previous)`
/// picks the next design.
pub(crate) fn run_schedule<F>(model: &StructuralModel, schedule: &Schedule, mut select: F) -> Result<BinaryRun, DriverError>
where
    F: FnMut(usize, &KnapsackInstance, &BinaryDensity) -> Result<StepChoice, KnapsackError>,
{
    let n = model.n_elements();
    let v = model.mesh().volumes();
    let v_total: f64 = v.iter().sum();
    let v_c = schedule.volfrac * v_total;
    let solver = EquilibriumSolver::new(model);
    let fem = |gamma: usize, e: FemError| DriverError::Fem { gamma, source: e };

    let mut record = RunRecord::new(schedule.method);
    let mut density = BinaryDensity::ones(n);
    let mut rho = density.values();
    let mut v_prev = v_total;
    let mut report = solver.solve(&rho, 1.0).map_err(|e| fem(1, e))?;

    for gamma in 1..=schedule.max_outer {
        let start = Instant::now();
        let w = schedule.gain.gains(model, &rho, &report.displacement);
        let volume_target = volume_schedule(v_prev, schedule.mu, v_c);
        let instance = KnapsackInstance::new(w.clone(), v.clone(), volume_target)
            .map_err(|source| DriverError::Knapsack { gamma, source })?;
        let select_start = Instant::now();
        let choice = select(gamma, &instance, &density).map_err(|source| DriverError::Knapsack { gamma, source })?;
        let select_ms = select_start.elapsed().as_secs_f64() * 1e3;

        let p_new = -choice.density.gain(&w);
        let p_old = -density.gain(&w);
        let changed = density.iter().zip(choice.density.iter()).filter(|(a, b)| a != b).count();
        density = choice.density;
        rho = density.values();
        report = solver.solve(&rho, 1.0).map_err(|e| fem(gamma, e))?;

        record.entries.push(IterationLog {
            gamma,
            volume_target,
            volume: density.volume(&v),
            inner_iters: choice.inner_iters,
            compliance: compliance(&report.displacement, model.load()),
            strain_energy: strain_energy(model, &rho, 1.0, &report.displacement),
            p_u: Some(p_new),
            p_dual: choice.p_dual,
            tau_start: None,
            tau: choice.tau,
            beta: choice.beta,
            perturbed: choice.perturbed,
            changed,
            select_ms,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });

        if (p_new - p_old).abs() <= schedule.omega2 && volume_target <= v_c * (1.0 + 1e-12) {
            record.converged = true;
            let compliance = compliance(&report.displacement, model.load());
            let strain_energy = strain_energy(model, &rho, 1.0, &report.displacement);
            return Ok(BinaryRun {
                density,
                displacement: report.displacement,
                record,
                compliance,
                strain_energy,
                relative_residual: report.relative_residual,
            });
        }
        v_prev = volume_target;
    }
    Err(DriverError::MaxOuterExceeded { max_outer: schedule.max_outer, record: Box::new(record) })
}

/// Canonical dual topology optimization: each outer step solves the
/// equilibrium at the current design, takes element energies as knapsack
/// gains, and selects the next design with the canonical-dual knapsack
/// solver under the scheduled volume, warm-starting `τ` from the previous
/// step.
pub fn run_cdt(model: &StructuralModel, config: &CdtConfig) -> Result<BinaryRun, DriverError> {
    config.validate()?;
    let schedule = Schedule {
        method: Method::Cdt,
        volfrac: config.volfrac,
        mu: config.mu,
        omega2: config.omega2,
        max_outer: config.max_outer,
        gain: config.gain,
    };
    let mut tau = config.tau0;
    let mut starts = Vec::new();
    let mut run = run_schedule(model, &schedule, |_, instance, _| {
        starts.push(tau);
        let sol = knapsack::solve(instance, &config.knapsack_params(tau))?;
        tau = sol.dual.tau;
        let c = &sol.certificate;
        Ok(StepChoice {
            density: sol.density,
            inner_iters: c.inner_iterations,
            p_dual: Some(c.dual_beta),
            tau: Some(sol.dual.tau),
            beta: Some(c.beta),
            perturbed: c.perturbed || c.budget_snapped,
        })
    });
    let attach = |record: &mut RunRecord| {
        for (entry, &t) in record.entries.iter_mut().zip(&starts) {
            entry.tau_start = Some(t);
        }
    };
    match &mut run {
        Ok(r) => attach(&mut r.record),
        Err(DriverError::MaxOuterExceeded { record, .. }) => attach(record),
        Err(_) => {}
    }
    run
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{build_cantilever2d, build_mbb};

    #[test]
    fn schedule_examples() {
        assert_eq!(volume_schedule(1.0, 0.9, 0.5), 0.9);
        assert_eq!(volume_schedule(0.52, 0.9, 0.5), 0.5);
        let mut v = 1.0;
        let mut steps = 0;
        while v > 0.4 {
            v = volume_schedule(v, 0.975, 0.4);
            steps += 1;
        }
        assert_eq!(steps, (0.4f64.ln() / 0.975f64.ln()).ceil() as usize);
        assert_eq!(steps, 37);
    }

    #[test]
    fn config_validation() {
        assert!(CdtConfig::new(0.4, 0.97).is_ok());
        assert!(CdtConfig::new(1.5, 0.97).is_err());
        assert!(CdtConfig::new(0.4, 0.3).is_err());
        assert!(CdtConfig::new(0.4, 1.0).is_err());
        assert!(CdtConfig::new(1.0, 0.9).is_ok());
    }

    #[test]
    fn full_volume_stops_after_one_step() {
        let m = build_cantilever2d(8, 4).unwrap();
        let run = run_cdt(&m, &CdtConfig::new(1.0, 0.9).unwrap()).unwrap();
        assert_eq!(run.record.len(), 1);
        assert_eq!(run.density, BinaryDensity::ones(32));
        assert!(run.record.converged);
    }

    #[test]
    fn small_mbb_run_is_binary_and_feasible() {
        let m = build_mbb(20, 8).unwrap();
        let cfg = CdtConfig::new(0.5, 0.95).unwrap();
        let run = run_cdt(&m, &cfg).unwrap();
        let n = m.n_elements() as f64;
        assert!(run.volume(&m) <= 0.5 + 1.0 / n);
        assert!(run.compliance.is_finite() && run.compliance > 0.0);
        // warm start: each step begins from the previous multiplier
        let e = &run.record.entries;
        assert_eq!(e[0].tau_start, Some(1.0));
        for pair in e.windows(2) {
            assert_eq!(pair[1].tau_start, pair[0].tau);
            assert!(pair[1].volume_target <= pair[0].volume_target);
        }
    }

    #[test]
    fn upper_objective_at_full_design() {
        let m = build_cantilever2d(6, 3).unwrap();
        let rho = vec![1.0; 18];
        let u = crate::fem::solve_equilibrium(&m, &rho, 1.0).unwrap();
        let w = element_energies(&m, &u);
        let c = compliance(&u, m.load());
        assert!((primal_upper_objective(&rho, &w, &u, m.load()) - c).abs() < 1e-9 * c);
        assert!((primal_upper_objective(&[0.0; 18], &w, &u, m.load()) - 2.0 * c).abs() < 1e-12);
    }
}
