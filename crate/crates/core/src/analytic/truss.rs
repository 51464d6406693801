use crate::knapsack::{solve, BinaryDensity, KnapsackError, KnapsackInstance, KnapsackParams};

/// Two bar groups with diagonal stiffness `K₁ = diag(a, b)`, `K₂ = diag(b, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrussSpec {
    pub a: f64,
    pub b: f64,
    pub f: [f64; 2],
    /// The load used for selection is `(f₁ + ε, f₂)`.
    pub epsilon: f64,
}

impl TrussSpec {
    /// `a = (2 − √2)/2`, `b = (4 + √2)/2`, `f = (1, 1)`.
    pub fn symmetric(epsilon: f64) -> Self {
        let s = std::f64::consts::SQRT_2;
        Self { a: (2.0 - s) / 2.0, b: (4.0 + s) / 2.0, f: [1.0, 1.0], epsilon }
    }

    /// `−½ (1/a + 1/b)`, the potential of either single-group design under a
    /// unit load.
    pub fn reference_potential(&self) -> f64 {
        -0.5 * (1.0 / self.a + 1.0 / self.b)
    }

    fn stiffness(&self, rho: [f64; 2]) -> [f64; 2] {
        [rho[0] * self.a + rho[1] * self.b, rho[0] * self.b + rho[1] * self.a]
    }

    fn displacement(&self, rho: [f64; 2], f: [f64; 2]) -> [f64; 2] {
        let k = self.stiffness(rho);
        [f[0] / k[0], f[1] / k[1]]
    }

    /// Total potential `½ uᵀK(ρ)u − fᵀu` at equilibrium.
    pub fn potential(&self, rho: [f64; 2], f: [f64; 2]) -> f64 {
        let u = self.displacement(rho, f);
        let k = self.stiffness(rho);
        0.5 * (k[0] * u[0] * u[0] + k[1] * u[1] * u[1]) - (f[0] * u[0] + f[1] * u[1])
    }

    pub fn perturbed_load(&self) -> [f64; 2] {
        [self.f[0] + self.epsilon, self.f[1]]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrussResult {
    pub density: BinaryDensity,
    /// Potential of the selected design under the perturbed load.
    pub potential: f64,
    /// Potential of the selected design under the nominal load `f`.
    pub nominal_potential: f64,
    pub outer_steps: usize,
}

/// Bi-level alternation on the two-group truss: equilibrium at the current
/// design, stored group energies as gains, knapsack under `ρ₁ + ρ₂ ≤ 1`.
/// Starts from `ρ = (1, 1)` and stops when the selection repeats.
pub fn symmetric_truss(spec: &TrussSpec, perturb: bool) -> Result<TrussResult, KnapsackError> {
    if !(spec.a > 0.0 && spec.b > 0.0) {
        return Err(KnapsackError::InvalidInstance(format!(
            "group stiffnesses a = {}, b = {} must be positive",
            spec.a, spec.b
        )));
    }
    let f = spec.perturbed_load();
    let params = KnapsackParams { perturb, ..Default::default() };
    let mut rho = [1.0, 1.0];
    for step in 1..=10 {
        let u = spec.displacement(rho, f);
        let w = vec![
            0.5 * rho[0] * (spec.a * u[0] * u[0] + spec.b * u[1] * u[1]),
            0.5 * rho[1] * (spec.b * u[0] * u[0] + spec.a * u[1] * u[1]),
        ];
        let instance = KnapsackInstance::new(w, vec![1.0, 1.0], 1.0)?;
        let density = solve(&instance, &params)?.density;
        let next = [f64::from(u8::from(density.get(0))), f64::from(u8::from(density.get(1)))];
        if next == rho {
            return Ok(TrussResult {
                potential: spec.potential(rho, f),
                nominal_potential: spec.potential(rho, spec.f),
                density,
                outer_steps: step,
            });
        }
        rho = next;
    }
    Err(KnapsackError::Unsolved { beta: f64::NAN, diagnosis: "truss selection did not settle in 10 steps".into() })
}
