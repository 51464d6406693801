/// `Π(x) = ½ β (½‖x‖² − λ)² − xᵀf` on `ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleWellSpec {
    pub beta: f64,
    pub lambda: f64,
    pub f: Vec<f64>,
}

impl DoubleWellSpec {
    pub fn new(beta: f64, lambda: f64, f: Vec<f64>) -> Result<Self, String> {
        if !(beta > 0.0 && lambda > 0.0) {
            return Err(format!("beta = {beta} and lambda = {lambda} must be positive"));
        }
        if f.is_empty() || f.iter().any(|x| !x.is_finite()) {
            return Err("f must be a nonempty finite vector".into());
        }
        Ok(Self { beta, lambda, f })
    }

    pub fn dim(&self) -> usize {
        self.f.len()
    }

    fn f_norm_sq(&self) -> f64 {
        self.f.iter().map(|x| x * x).sum()
    }

    pub fn primal(&self, x: &[f64]) -> f64 {
        let xi = 0.5 * x.iter().map(|v| v * v).sum::<f64>();
        let fx: f64 = x.iter().zip(&self.f).map(|(a, b)| a * b).sum();
        0.5 * self.beta * (xi - self.lambda).powi(2) - fx
    }

    /// `Π^d(ς) = −‖f‖² / (2ς) − ς² / (2β) − λς`. At `ς = 0` with `f = 0` the
    /// first term is dropped.
    pub fn dual(&self, s: f64) -> f64 {
        let f2 = self.f_norm_sq();
        let head = if f2 == 0.0 { 0.0 } else { -f2 / (2.0 * s) };
        head - s * s / (2.0 * self.beta) - self.lambda * s
    }

    /// `(ς/β + λ) ς² − ½‖f‖²`.
    pub fn dual_residual(&self, s: f64) -> f64 {
        (s / self.beta + self.lambda) * s * s - 0.5 * self.f_norm_sq()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    GlobalMin,
    LocalMin,
    LocalMax,
    Saddle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub sigma: f64,
    pub x: Vec<f64>,
    pub kind: CriticalKind,
    pub primal: f64,
    pub dual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialityReport {
    /// Sorted by `ς`, descending.
    pub points: Vec<CriticalPoint>,
    /// For `f = 0`: minimizers `±√(2λ) e₁` recovered from the perturbed
    /// load `δ e₁`.
    pub symmetric_minimizers: Option<[Vec<f64>; 2]>,
}

impl TrialityReport {
    /// `max |Π(x_i) − Π^d(ς_i)| / max(1, |Π(x_i)|)`.
    pub fn max_triality_gap(&self) -> f64 {
        self.points.iter().map(|p| (p.primal - p.dual).abs() / p.primal.abs().max(1.0)).fold(0.0, f64::max)
    }
}

/// Hessian `ς I + β x xᵀ` has eigenvalue `ς` (n − 1 times) and `ς + β‖x‖²`.
fn classify(s: f64, x: &[f64], beta: f64, n: usize) -> CriticalKind {
    if s > 0.0 {
        return CriticalKind::GlobalMin;
    }
    let radial = s + beta * x.iter().map(|v| v * v).sum::<f64>();
    let mut eig = vec![radial];
    if n > 1 {
        eig.push(s);
    }
    if eig.iter().all(|&l| l > 0.0) {
        CriticalKind::LocalMin
    } else if eig.iter().all(|&l| l < 0.0) {
        CriticalKind::LocalMax
    } else {
        CriticalKind::Saddle
    }
}

/// Newton on the factored residual.
fn polish(spec: &DoubleWellSpec, mut s: f64) -> f64 {
    for _ in 0..50 {
        let r = spec.dual_residual(s);
        let d = (3.0 * s / spec.beta + 2.0 * spec.lambda) * s;
        if d == 0.0 {
            break;
        }
        let next = s - r / d;
        if !(spec.dual_residual(next).abs() < r.abs()) {
            break;
        }
        s = next;
    }
    s
}

/// Solves the dual cubic for every real root, maps each to `x = f/ς` and
/// classifies it. With `f = 0` the only nonzero root is `ς = −βλ` at
/// `x = 0`, and the two minimizers are recovered from a perturbed load.
pub fn double_well_triality(spec: &DoubleWellSpec) -> TrialityReport {
    let (beta, lambda, n) = (spec.beta, spec.lambda, spec.dim());
    let f2 = spec.f_norm_sq();
    if f2 == 0.0 {
        let sigma = -beta * lambda;
        let x = vec![0.0; n];
        let kind = classify(sigma, &x, beta, n);
        let point = CriticalPoint { sigma, primal: spec.primal(&x), dual: spec.dual(sigma), x, kind };
        let delta = 1e-8;
        let mut e1 = vec![0.0; n];
        e1[0] = delta;
        let perturbed = DoubleWellSpec { f: e1, ..spec.clone() };
        let plus = double_well_triality(&perturbed).points[0].x.clone();
        let minus = plus.iter().map(|v| -v).collect();
        return TrialityReport { points: vec![point], symmetric_minimizers: Some([plus, minus]) };
    }
    // ς³ + Bς² − ½β‖f‖² = 0 with B = βλ. g(ς) = ς²(ς/β + λ) − ½‖f‖² is
    // increasing and convex on ς > 0, so Newton from an upper bound reaches
    // the single positive root monotonically.
    let c = 0.5 * f2;
    let positive = polish(spec, (c / lambda).sqrt().min((beta * c).cbrt()));
    // deflate: ς² + (B + r)ς + r(B + r) = 0
    let (bb, r) = (beta * lambda, positive);
    let disc = (bb + r) * (bb - 3.0 * r);
    let mut roots = vec![positive];
    if disc >= 0.0 {
        let q = -0.5 * ((bb + r) + disc.sqrt());
        roots.push(polish(spec, r * (bb + r) / q));
        roots.push(polish(spec, q));
    }
    let mut points: Vec<CriticalPoint> = Vec::new();
    for s in roots {
        if points.iter().any(|p| (p.sigma - s).abs() <= 1e-12 * s.abs().max(1.0)) {
            continue;
        }
        let x: Vec<f64> = spec.f.iter().map(|fi| fi / s).collect();
        let kind = classify(s, &x, beta, n);
        points.push(CriticalPoint { sigma: s, primal: spec.primal(&x), dual: spec.dual(s), x, kind });
    }
    TrialityReport { points, symmetric_minimizers: None }
}
