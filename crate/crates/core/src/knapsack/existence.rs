use super::{KnapsackError, KnapsackInstance, VOLUME_RTOL};

/// Minimizer of `F(τ) = Σ (|w_e − τ v_e| − τ v_e) + 2 τ V` over `τ ≥ 0`.
///
/// `F` is convex and piecewise linear with slope `2 (V − Σ_{w_e/v_e > τ} v_e)`,
/// so its minimizer is either a single breakpoint or the closed interval
/// between two consecutive breakpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauCritical {
    /// The minimizer, or the midpoint of the minimizing interval.
    pub tau: f64,
    pub lo: f64,
    pub hi: f64,
}

impl TauCritical {
    pub fn is_interval(&self) -> bool {
        self.hi > self.lo
    }

    pub fn contains(&self, tau: f64) -> bool {
        self.lo <= tau && tau <= self.hi
    }
}

/// Result of the uniqueness diagnosis at `τ_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceReport {
    pub tau_c: TauCritical,
    /// Elements with `|θ_e(τ_c)| ≤ tol`, ascending.
    pub degenerate_indices: Vec<usize>,
    pub unique: bool,
}

/// Value of the piecewise-linear function minimized by [`tau_critical`].
pub fn critical_objective(instance: &KnapsackInstance, tau: f64) -> f64 {
    let (w, v) = (instance.gains(), instance.volumes());
    let sum: f64 = w
        .iter()
        .zip(v)
        .map(|(we, ve)| (we - tau * ve).abs() - tau * ve)
        .sum();
    sum + 2.0 * tau * instance.budget()
}

pub fn tau_critical(instance: &KnapsackInstance) -> TauCritical {
    let (w, v) = (instance.gains(), instance.volumes());
    let budget = instance.budget();
    let vol_tol = VOLUME_RTOL * instance.total_volume();

    let mut ratios: Vec<(f64, f64)> = w.iter().zip(v).map(|(we, ve)| (we / ve, *ve)).collect();
    ratios.sort_by(|a, b| a.0.total_cmp(&b.0));

    // volume of elements whose ratio is strictly above the current position
    let mut above: f64 = ratios.iter().filter(|(r, _)| *r > 0.0).map(|(_, ve)| ve).sum();
    let first_positive = ratios.iter().position(|(r, _)| *r > 0.0);

    let slope_sign = |above: f64| {
        let s = budget - above;
        if s.abs() <= vol_tol {
            0
        } else if s > 0.0 {
            1
        } else {
            -1
        }
    };

    // slope on (0, first positive breakpoint)
    match slope_sign(above) {
        1 => return TauCritical { tau: 0.0, lo: 0.0, hi: 0.0 },
        0 => {
            let hi = first_positive.map_or(0.0, |k| ratios[k].0);
            return TauCritical { tau: 0.5 * hi, lo: 0.0, hi };
        }
        _ => {}
    }

    let mut k = first_positive.unwrap_or(ratios.len());
    while k < ratios.len() {
        let r = ratios[k].0;
        // pass every element sitting at this breakpoint
        while k < ratios.len() && ratios[k].0 == r {
            above -= ratios[k].1;
            k += 1;
        }
        if k == ratios.len() {
            above = 0.0;
        }
        match slope_sign(above) {
            1 => return TauCritical { tau: r, lo: r, hi: r },
            0 => {
                let hi = if k < ratios.len() { ratios[k].0 } else { r };
                return TauCritical { tau: 0.5 * (r + hi), lo: r, hi };
            }
            _ => {}
        }
    }
    // unreachable for a positive budget: the slope past the last breakpoint is 2V
    let r = ratios.last().map_or(0.0, |x| x.0);
    TauCritical { tau: r, lo: r, hi: r }
}

pub fn existence_check(instance: &KnapsackInstance, tol: f64) -> ExistenceReport {
    let tau_c = tau_critical(instance);
    let degenerate_indices: Vec<usize> = (0..instance.len())
        .filter(|&e| instance.theta(e, tau_c.tau).abs() <= tol)
        .collect();
    ExistenceReport { unique: degenerate_indices.is_empty(), tau_c, degenerate_indices }
}

/// Adds the deterministic ramp `ε (n − e) / n` (0-based `e`) to the gains so
/// tied ratios become distinct. The input is left untouched.
pub fn perturb(instance: &KnapsackInstance, epsilon: f64) -> Result<KnapsackInstance, KnapsackError> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(KnapsackError::InvalidInstance(format!(
            "perturbation {epsilon} must be nonnegative"
        )));
    }
    let n = instance.len() as f64;
    let w = instance
        .gains()
        .iter()
        .enumerate()
        .map(|(e, we)| we + epsilon * (n - e as f64) / n)
        .collect();
    Ok(instance.with_gains(w))
}
