//! Linear 0-1 knapsack solved through its β-perturbed canonical dual.
//!
//! The upper level of the topology problem picks a subset of elements that
//! maximizes the total gain `wᵀρ` under a volume budget `vᵀρ ≤ V`. Instead of
//! searching `{0,1}ⁿ`, the solver works with the dual variables `(σ, τ)`: each
//! `σ_e` is the positive root of a cubic in `θ_e(τ) = τ v_e − w_e`, `τ` has a
//! closed-form update, and the binary density is recovered analytically from
//! the converged dual point.

mod brute;
mod dual;
mod existence;
mod solver;

pub use brute::{brute_force, subset_gain, BruteForceResult, BRUTE_FORCE_MAX_N};
pub use dual::{dual_objective, dual_objective_beta, lagrangian_bound, sigma_from_theta, tau_update};
pub use existence::{critical_objective, existence_check, perturb, tau_critical, ExistenceReport, TauCritical};
pub use solver::{
    inner_fixed_point, recover_density, solve, Certificate, InnerSolution, KnapsackParams,
    KnapsackSolution,
};

use thiserror::Error;

/// Relative slack used for every volume comparison, so that `m · (1/n)` and
/// `m / n` compare equal.
pub(crate) const VOLUME_RTOL: f64 = 1e-12;

/// Binary rounding tolerance for recovered densities.
pub const BINARY_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KnapsackError {
    #[error("invalid knapsack instance: {0}")]
    InvalidInstance(String),
    #[error("theta = {theta:e} is zero for element {index}; the dual cubic has no positive root")]
    DegenerateTheta { index: usize, theta: f64 },
    #[error("invalid dual point: {0}")]
    InvalidDual(String),
    #[error("recovered density is not binary (max deviation {max_deviation:e} at element {index})")]
    NotBinary { index: usize, max_deviation: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("instance is degenerate at tau_c = {tau_c} (elements {indices:?}) and perturbation is disabled")]
    DegenerateInstance { tau_c: f64, indices: Vec<usize> },
    #[error("no binary solution up to beta = {beta:e}: {diagnosis}")]
    Unsolved { beta: f64, diagnosis: String },
    #[error("brute force limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
}

/// Element gains, volumes and the volume budget.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    w: Vec<f64>,
    v: Vec<f64>,
    budget: f64,
}

impl KnapsackInstance {
    pub fn new(w: Vec<f64>, v: Vec<f64>, budget: f64) -> Result<Self, KnapsackError> {
        let invalid = |m: String| Err(KnapsackError::InvalidInstance(m));
        if w.is_empty() {
            return invalid("no elements".into());
        }
        if w.len() != v.len() {
            return invalid(format!("{} gains but {} volumes", w.len(), v.len()));
        }
        if let Some(e) = w.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return invalid(format!("gain w[{e}] = {} is not a finite nonnegative number", w[e]));
        }
        if let Some(e) = v.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
            return invalid(format!("volume v[{e}] = {} is not positive", v[e]));
        }
        let total: f64 = v.iter().sum();
        if !(budget.is_finite() && budget > 0.0) {
            return invalid(format!("budget {budget} must be positive"));
        }
        if budget > total * (1.0 + VOLUME_RTOL) {
            return invalid(format!("budget {budget} exceeds total volume {total}"));
        }
        Ok(Self { w, v, budget: budget.min(total) })
    }

    /// Equal volumes `1/n` summing to one.
    pub fn with_unit_total_volume(w: Vec<f64>, budget: f64) -> Result<Self, KnapsackError> {
        let n = w.len().max(1);
        Self::new(w, vec![1.0 / n as f64; n], budget)
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn gains(&self) -> &[f64] {
        &self.w
    }

    pub fn volumes(&self) -> &[f64] {
        &self.v
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn total_volume(&self) -> f64 {
        self.v.iter().sum()
    }

    pub fn max_volume(&self) -> f64 {
        self.v.iter().copied().fold(0.0, f64::max)
    }

    /// `θ_e(τ) = τ v_e − w_e`.
    pub fn theta(&self, e: usize, tau: f64) -> f64 {
        tau * self.v[e] - self.w[e]
    }

    pub(crate) fn fits(&self, volume: f64, budget: f64) -> bool {
        volume <= budget + VOLUME_RTOL * self.total_volume()
    }

    pub(crate) fn with_budget(&self, budget: f64) -> Self {
        Self { w: self.w.clone(), v: self.v.clone(), budget }
    }

    pub(crate) fn with_gains(&self, w: Vec<f64>) -> Self {
        Self { w, v: self.v.clone(), budget: self.budget }
    }
}

/// Canonical dual variables: one `σ_e > 0` per element and the volume
/// multiplier `τ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint {
    pub sigma: Vec<f64>,
    pub tau: f64,
}

impl DualPoint {
    pub fn new(sigma: Vec<f64>, tau: f64) -> Result<Self, KnapsackError> {
        let point = Self { sigma, tau };
        point.validate()?;
        Ok(point)
    }

    pub(crate) fn validate(&self) -> Result<(), KnapsackError> {
        if let Some(e) = self.sigma.iter().position(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(KnapsackError::InvalidDual(format!(
                "sigma[{e}] = {} is not positive",
                self.sigma[e]
            )));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(KnapsackError::InvalidDual(format!("tau = {} is negative", self.tau)));
        }
        Ok(())
    }
}

/// A `{0,1}`-valued density, stored as `0.0`/`1.0` so it can be fed straight
/// into stiffness assembly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryDensity {
    rho: Vec<u8>,
}

impl BinaryDensity {
    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        Self { rho: bits.into_iter().map(u8::from).collect() }
    }

    pub fn ones(n: usize) -> Self {
        Self { rho: vec![1; n] }
    }

    pub fn zeros(n: usize) -> Self {
        Self { rho: vec![0; n] }
    }

    /// Accepts values within [`BINARY_TOL`] of 0 or 1.
    pub fn from_values(values: &[f64]) -> Result<Self, KnapsackError> {
        let mut worst = (0usize, 0.0f64);
        let mut rho = Vec::with_capacity(values.len());
        for (e, &x) in values.iter().enumerate() {
            if !x.is_finite() {
                return Err(KnapsackError::NonFinite("density"));
            }
            let dev = x.abs().min((x - 1.0).abs());
            if dev > worst.1 {
                worst = (e, dev);
            }
            rho.push(u8::from(x >= 0.5));
        }
        if worst.1 > BINARY_TOL {
            return Err(KnapsackError::NotBinary { index: worst.0, max_deviation: worst.1 });
        }
        Ok(Self { rho })
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn get(&self, e: usize) -> bool {
        self.rho[e] == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.rho.iter().map(|&b| b == 1)
    }

    pub fn values(&self) -> Vec<f64> {
        self.rho.iter().map(|&b| f64::from(b)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.rho.iter().filter(|&&b| b == 1).count()
    }

    /// Indices of selected elements, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter().enumerate().filter_map(|(e, b)| b.then_some(e)).collect()
    }

    pub fn volume(&self, v: &[f64]) -> f64 {
        self.iter().zip(v).filter(|(b, _)| *b).map(|(_, x)| x).sum()
    }

    pub fn gain(&self, w: &[f64]) -> f64 {
        self.iter().zip(w).filter(|(b, _)| *b).map(|(_, x)| x).sum()
    }
}
