use crate::knapsack::{
    brute_force, existence_check, solve, BinaryDensity, BruteForceResult, ExistenceReport, KnapsackError,
    KnapsackInstance, KnapsackParams,
};

/// Two unit-volume elements under a unit budget.
#[derive(Debug, Clone, PartialEq)]
pub struct BuridanResult {
    pub instance: KnapsackInstance,
    pub existence: ExistenceReport,
    pub optima: BruteForceResult,
    /// `None` when the instance is degenerate and perturbation is off.
    pub density: Option<BinaryDensity>,
}

/// Gains `(w_base + ε, w_base)`, or `(w_base, w_base − ε)` for negative `ε`,
/// so the perturbation always raises one pile above the other.
pub fn buridan(w_base: f64, epsilon: f64, perturb: bool) -> Result<BuridanResult, KnapsackError> {
    if !(w_base > 0.0) {
        return Err(KnapsackError::InvalidInstance(format!("w_base = {w_base} must be positive")));
    }
    let w = if epsilon >= 0.0 { vec![w_base + epsilon, w_base] } else { vec![w_base, w_base - epsilon] };
    let instance = KnapsackInstance::new(w, vec![1.0, 1.0], 1.0)?;
    let existence = existence_check(&instance, 1e-12 * (w_base + epsilon.abs()));
    let optima = brute_force(&instance)?;
    let params = KnapsackParams { perturb, ..Default::default() };
    let density = match solve(&instance, &params) {
        Ok(sol) => Some(sol.density),
        Err(KnapsackError::DegenerateInstance { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(BuridanResult { instance, existence, optima, density })
}
