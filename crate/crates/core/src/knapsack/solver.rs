use rayon::prelude::*;

use super::dual::{dual_objective, dual_objective_beta, lagrangian_bound, sigma_from_theta, tau_update};
use super::existence::{existence_check, perturb, tau_critical, ExistenceReport};
use super::{BinaryDensity, DualPoint, KnapsackError, KnapsackInstance, BINARY_TOL};

/// Element count above which the per-element cubic solves run on the rayon pool.
const PARALLEL_MIN_LEN: usize = 4096;

/// Relative change of `P^d_β` below which the inner loop is considered stalled.
const STALL_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackParams {
    /// Starting multiplier for the inner iteration.
    pub tau0: f64,
    /// Absolute tolerance on the change of the dual objective.
    pub omega1: f64,
    pub max_iters: usize,
    /// Initial β; `None` means `max(1, 10 · max_e w_e)`.
    pub beta0: Option<f64>,
    /// β is doubled at most this many times when the recovery is not binary.
    pub max_doublings: u32,
    /// Break ties and snap fractional budgets instead of failing on degenerate instances.
    pub perturb: bool,
    /// Ramp magnitude relative to `max_e w_e`.
    pub perturb_scale: f64,
    /// `θ_e(τ_c)` below this (relative to `max_e w_e`) counts as zero.
    pub degeneracy_rtol: f64,
}

impl Default for KnapsackParams {
    fn default() -> Self {
        Self {
            tau0: 1.0,
            omega1: 2e-16,
            max_iters: 1000,
            beta0: None,
            max_doublings: 20,
            perturb: true,
            perturb_scale: 1e-8,
            degeneracy_rtol: 1e-12,
        }
    }
}

/// Last dual point of the inner fixed-point loop.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerSolution {
    pub point: DualPoint,
    pub iterations: usize,
    /// `|ΔP^d_β| ≤ ω₁` was reached.
    pub converged: bool,
    /// Stopped on `|ΔP^d_β| ≤ 1e-12 · |P^d_β|` before reaching `ω₁`.
    pub stalled: bool,
    pub dual_value: f64,
}

/// Alternates the per-element cubic solves for `σ` with the closed-form `τ`
/// update until the β-perturbed dual stops changing. The returned `σ` is
/// re-solved at the final `τ`, so the pair satisfies the cubic exactly even
/// when `τ` is still drifting along a flat direction of the dual.
pub fn inner_fixed_point(
    instance: &KnapsackInstance,
    budget: f64,
    beta: f64,
    tau0: f64,
    omega1: f64,
    max_iters: usize,
) -> Result<InnerSolution, KnapsackError> {
    if !(tau0 >= 0.0 && tau0.is_finite()) {
        return Err(KnapsackError::InvalidDual(format!("tau0 = {tau0} must be nonnegative")));
    }
    if !(omega1 > 0.0) || max_iters == 0 {
        return Err(KnapsackError::InvalidDual("omega1 > 0 and max_iters >= 1 required".into()));
    }
    let mut tau = tau0;
    let mut previous: Option<f64> = None;
    for k in 1..=max_iters {
        let sigma = sigma_sweep(instance, tau, beta)?;
        let tau_next = tau_update(&sigma, instance, budget)?;
        let point = DualPoint { sigma, tau: tau_next };
        let value = dual_objective_beta(&point, instance, budget, beta);
        if !value.is_finite() {
            return Err(KnapsackError::NonFinite("dual objective"));
        }
        if let Some(prev) = previous {
            let change = (value - prev).abs();
            if change <= omega1 || change <= STALL_RTOL * value.abs() {
                let (point, dual_value) = consistent(instance, budget, beta, point.tau)?;
                return Ok(InnerSolution {
                    point,
                    iterations: k,
                    converged: change <= omega1,
                    stalled: change > omega1,
                    dual_value,
                });
            }
        }
        previous = Some(value);
        tau = tau_next;
    }
    let (point, dual_value) = consistent(instance, budget, beta, tau)?;
    Ok(InnerSolution { point, iterations: max_iters, converged: false, stalled: false, dual_value })
}

fn consistent(
    instance: &KnapsackInstance,
    budget: f64,
    beta: f64,
    tau: f64,
) -> Result<(DualPoint, f64), KnapsackError> {
    let point = DualPoint { sigma: sigma_sweep(instance, tau, beta)?, tau };
    let value = dual_objective_beta(&point, instance, budget, beta);
    if !value.is_finite() {
        return Err(KnapsackError::NonFinite("dual objective"));
    }
    Ok((point, value))
}

fn sigma_sweep(instance: &KnapsackInstance, tau: f64, beta: f64) -> Result<Vec<f64>, KnapsackError> {
    let one = |e: usize| sigma_from_theta(instance.theta(e, tau), beta).unwrap_or(f64::NAN);
    let sigma: Vec<f64> = if instance.len() >= PARALLEL_MIN_LEN {
        (0..instance.len()).into_par_iter().map(one).collect()
    } else {
        (0..instance.len()).map(one).collect()
    };
    if let Some(index) = sigma.iter().position(|s| s.is_nan()) {
        let theta = instance.theta(index, tau);
        // re-run to tell a zero theta from other failures
        return Err(match sigma_from_theta(theta, beta) {
            Err(KnapsackError::DegenerateTheta { theta, .. }) => {
                KnapsackError::DegenerateTheta { index, theta }
            }
            Err(other) => other,
            Ok(_) => KnapsackError::NonFinite("sigma"),
        });
    }
    Ok(sigma)
}

/// `ρ_e = ½ [1 − (τ v_e − w_e) / σ_e]`, accepted only if every value is within
/// [`BINARY_TOL`] of 0 or 1.
pub fn recover_density(
    point: &DualPoint,
    instance: &KnapsackInstance,
) -> Result<BinaryDensity, KnapsackError> {
    point.validate()?;
    if point.sigma.len() != instance.len() {
        return Err(KnapsackError::InvalidDual("dual point and instance differ in length".into()));
    }
    let raw: Vec<f64> = point
        .sigma
        .iter()
        .enumerate()
        .map(|(e, s)| 0.5 * (1.0 - instance.theta(e, point.tau) / s))
        .collect();
    BinaryDensity::from_values(&raw)
}

/// Everything needed to check a knapsack solution after the fact.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// `wᵀρ` with the caller's gains.
    pub objective: f64,
    /// `P_u(ρ) = −wᵀρ` on the instance actually solved (after any perturbation).
    pub primal: f64,
    /// `P^d_β(σ, τ)` at the returned dual point.
    pub dual_beta: f64,
    /// `P^d_u(σ, τ)` at the returned dual point.
    pub dual: f64,
    /// `|P_u(ρ) − P^d_β(σ, τ)|`.
    pub duality_residual: f64,
    /// Upper bound on the best gain minus the achieved gain; zero up to rounding
    /// for an optimal subset.
    pub bound_gap: f64,
    pub beta: f64,
    /// Budget the dual was solved with; below the requested budget when it had
    /// to be snapped to a whole-element prefix.
    pub effective_budget: f64,
    pub existence: ExistenceReport,
    pub perturbed: bool,
    pub budget_snapped: bool,
    /// The dual point was taken at the critical multiplier rather than from
    /// the fixed-point iteration.
    pub critical_fallback: bool,
    pub inner_iterations: usize,
    pub beta_doublings: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackSolution {
    pub density: BinaryDensity,
    pub dual: DualPoint,
    pub certificate: Certificate,
}

/// Globally optimal subset via the canonical dual, with β escalation.
///
/// Degenerate instances are handled in two steps when `params.perturb` is set:
/// tied critical elements get the ramp perturbation, and a single remaining
/// critical element means the budget ends inside it, so the budget is reduced
/// to the volume of the elements strictly above `τ_c`.
pub fn solve(
    instance: &KnapsackInstance,
    params: &KnapsackParams,
) -> Result<KnapsackSolution, KnapsackError> {
    let max_w = instance.gains().iter().copied().fold(0.0, f64::max);
    let w_scale = if max_w > 0.0 { max_w } else { 1.0 };
    let tol = params.degeneracy_rtol * w_scale;

    let existence = existence_check(instance, tol);
    let mut working = instance.clone();
    let mut report = existence.clone();
    let mut perturbed = false;
    let mut budget_snapped = false;

    if !report.unique {
        if !params.perturb {
            return Err(KnapsackError::DegenerateInstance {
                tau_c: report.tau_c.tau,
                indices: report.degenerate_indices,
            });
        }
        if report.degenerate_indices.len() > 1 {
            working = perturb(instance, params.perturb_scale * w_scale)?;
            report = existence_check(&working, tol);
            perturbed = true;
        }
    }
    let mut budget = working.budget();
    if !report.unique {
        let tau_c = report.tau_c.tau;
        budget = (0..working.len())
            .filter(|&e| working.theta(e, tau_c) < -tol)
            .map(|e| working.volumes()[e])
            .sum();
        budget_snapped = true;
    }

    let (w, v) = (working.gains(), working.volumes());
    let beta0 = params.beta0.unwrap_or_else(|| f64::max(1.0, 10.0 * max_w));
    let bound_tol = 1e-10 * w.iter().sum::<f64>().max(1e-300);

    let critical_tau = || {
        if budget > 0.0 {
            tau_critical(&working.with_budget(budget)).tau
        } else {
            // any multiplier above every ratio selects nothing
            2.0 * w.iter().zip(v).map(|(a, b)| a / b).fold(0.0, f64::max) + 1.0
        }
    };

    // With the budget on a whole-element prefix the unperturbed dual is flat
    // in τ over the critical interval, and the β term pulls the fixed point
    // toward an end of it, where some θ_e vanishes. When the iteration runs
    // into such a point or its recovery is not certified, the dual is
    // evaluated directly at the critical multiplier instead.
    let mut at_critical = budget <= 0.0;
    let mut beta = beta0;
    let mut tau_start = params.tau0;
    let mut iterations = 0;
    let mut doublings = 0;
    loop {
        let point = if at_critical {
            consistent(&working, budget, beta, critical_tau())?.0
        } else {
            match inner_fixed_point(&working, budget, beta, tau_start, params.omega1, params.max_iters) {
                Ok(inner) => {
                    iterations += inner.iterations;
                    inner.point
                }
                Err(KnapsackError::DegenerateTheta { .. }) => {
                    at_critical = true;
                    continue;
                }
                Err(e) => return Err(e),
            }
        };
        match recover_density(&point, &working) {
            Ok(density) => {
                let gain = density.gain(w);
                let feasible = working.fits(density.volume(v), budget);
                let bound_gap = lagrangian_bound(&working, point.tau, budget) - gain;
                if feasible && bound_gap <= bound_tol {
                    let primal = -gain;
                    let dual_beta = dual_objective_beta(&point, &working, budget, beta);
                    let certificate = Certificate {
                        objective: density.gain(instance.gains()),
                        primal,
                        dual_beta,
                        dual: dual_objective(&point, &working, budget),
                        duality_residual: (primal - dual_beta).abs(),
                        bound_gap,
                        beta,
                        effective_budget: budget,
                        existence,
                        perturbed,
                        budget_snapped,
                        critical_fallback: at_critical,
                        inner_iterations: iterations,
                        beta_doublings: doublings,
                    };
                    return Ok(KnapsackSolution { density, dual: point, certificate });
                }
                if at_critical {
                    return Err(KnapsackError::Unsolved {
                        beta,
                        diagnosis: format!(
                            "binary recovery is not certified (feasible: {feasible}, bound gap {bound_gap:e})"
                        ),
                    });
                }
                at_critical = true;
            }
            Err(KnapsackError::NotBinary { index, max_deviation }) => {
                if doublings >= params.max_doublings {
                    if !at_critical {
                        at_critical = true;
                        continue;
                    }
                    return Err(KnapsackError::Unsolved {
                        beta,
                        diagnosis: format!(
                            "density still {max_deviation:e} away from binary at element {index} (tolerance {BINARY_TOL:e})"
                        ),
                    });
                }
                beta *= 2.0;
                doublings += 1;
                tau_start = point.tau;
            }
            Err(e) => return Err(e),
        }
    }
}
