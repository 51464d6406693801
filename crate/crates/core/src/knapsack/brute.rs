use super::{BinaryDensity, KnapsackError, KnapsackInstance};

pub const BRUTE_FORCE_MAX_N: usize = 25;

/// Exhaustive optimum of the knapsack: best gain and every subset attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub objective: f64,
    pub optima: Vec<BinaryDensity>,
}

impl BruteForceResult {
    pub fn contains(&self, rho: &BinaryDensity) -> bool {
        self.optima.iter().any(|o| o == rho)
    }
}

/// Gain of a subset, summed in index order. Used by both the oracle and the
/// solver so that equal subsets give bit-identical objectives.
pub fn subset_gain(rho: &BinaryDensity, w: &[f64]) -> f64 {
    rho.gain(w)
}

/// Enumerates `{0,1}ⁿ` in Gray-code order with running sums, then re-sums the
/// candidate optima in index order.
pub fn brute_force(instance: &KnapsackInstance) -> Result<BruteForceResult, KnapsackError> {
    let n = instance.len();
    if n > BRUTE_FORCE_MAX_N {
        return Err(KnapsackError::TooLarge { n, max: BRUTE_FORCE_MAX_N });
    }
    let (w, v) = (instance.gains(), instance.volumes());
    let budget = instance.budget();
    let scale = w.iter().copied().fold(0.0, f64::max).max(1e-300) * n as f64;
    let slack = 1e-12 * scale;

    let mut best = 0.0f64;
    let mut candidates: Vec<u32> = vec![0];
    let (mut gain, mut volume) = (0.0f64, 0.0f64);
    let mut mask: u32 = 0;
    for i in 1u32..(1u32 << n) {
        let bit = i.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            gain += w[bit];
            volume += v[bit];
        } else {
            gain -= w[bit];
            volume -= v[bit];
        }
        if !instance.fits(volume, budget) {
            continue;
        }
        if gain > best + slack {
            best = gain;
            candidates.clear();
            candidates.push(mask);
        } else if gain >= best - slack {
            candidates.push(mask);
        }
    }

    // exact re-evaluation of the candidates
    let subsets: Vec<BinaryDensity> = candidates
        .into_iter()
        .map(|m| BinaryDensity::from_bools((0..n).map(|e| m & (1 << e) != 0)))
        .filter(|rho| instance.fits(rho.volume(v), budget))
        .collect();
    let objective = subsets.iter().map(|r| subset_gain(r, w)).fold(0.0, f64::max);
    let optima = subsets
        .into_iter()
        .filter(|r| subset_gain(r, w) >= objective - slack)
        .collect();
    Ok(BruteForceResult { objective, optima })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buridan_has_two_optima() {
        let i = KnapsackInstance::new(vec![2.0, 2.0], vec![1.0, 1.0], 1.0).unwrap();
        let r = brute_force(&i).unwrap();
        assert_eq!(r.objective, 2.0);
        assert_eq!(r.optima.len(), 2);
    }

    #[test]
    fn dominance() {
        let i = KnapsackInstance::new(vec![3.0, 1.0], vec![0.5, 0.5], 0.5).unwrap();
        let r = brute_force(&i).unwrap();
        assert_eq!(r.objective, 3.0);
        assert_eq!(r.optima, vec![BinaryDensity::from_bools([true, false])]);
    }

    #[test]
    fn nothing_fits() {
        let i = KnapsackInstance::new(vec![1.0, 2.0], vec![1.0, 1.0], 1e-9).unwrap();
        let r = brute_force(&i).unwrap();
        assert_eq!(r.objective, 0.0);
        assert_eq!(r.optima, vec![BinaryDensity::zeros(2)]);
    }

    #[test]
    fn too_large() {
        let i = KnapsackInstance::with_unit_total_volume(vec![1.0; 26], 0.5).unwrap();
        assert!(matches!(brute_force(&i), Err(KnapsackError::TooLarge { n: 26, .. })));
    }
}
