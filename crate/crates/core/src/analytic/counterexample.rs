/// Two-group compliance `P_s(ρ) = ½ [f₁² / (a ρ₁ᵖ + b ρ₂ᵖ) + f₂² / (b ρ₁ᵖ + a ρ₂ᵖ)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpSurface {
    pub a: f64,
    pub b: f64,
    pub f: [f64; 2],
    pub p: f64,
}

impl SimpSurface {
    pub fn new(a: f64, b: f64, f: [f64; 2], p: f64) -> Result<Self, String> {
        if !(a > 0.0 && b > 0.0) {
            return Err(format!("a = {a} and b = {b} must be positive"));
        }
        if !(p >= 1.0) {
            return Err(format!("penalty p = {p} must be at least 1"));
        }
        Ok(Self { a, b, f, p })
    }

    pub fn eval(&self, r1: f64, r2: f64) -> f64 {
        let (x, y) = (r1.powf(self.p), r2.powf(self.p));
        0.5 * (self.f[0].powi(2) / (self.a * x + self.b * y) + self.f[1].powi(2) / (self.b * x + self.a * y))
    }

    /// Restriction to the boundary `ρ₁ + ρ₂ = 1`, parametrized by `t = ρ₁`.
    pub fn on_boundary(&self, t: f64) -> f64 {
        self.eval(t, 1.0 - t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleResult {
    /// `(ρ₁, ρ₂, P_s)` on the tensor grid `{k/m : k = 1..m}²`.
    pub samples: Vec<[f64; 3]>,
    /// Every global minimizer on `ρ₁ + ρ₂ = 1`.
    pub boundary_minima: Vec<[f64; 2]>,
    pub boundary_min_value: f64,
}

/// Grid step used to bracket minima along the boundary.
pub const BOUNDARY_STEP: f64 = 1e-4;

/// Samples the surface and finds the global minimizers of its boundary
/// restriction: a grid with step [`BOUNDARY_STEP`] brackets each local
/// minimum, golden-section search refines interior ones, and the minima that
/// tie with the best (relative 1e-9) are all returned.
pub fn simp_counterexample(surface: &SimpSurface, resolution: usize) -> CounterexampleResult {
    let m = resolution.max(1);
    let mut samples = Vec::with_capacity(m * m);
    for i in 1..=m {
        for j in 1..=m {
            let (r1, r2) = (i as f64 / m as f64, j as f64 / m as f64);
            samples.push([r1, r2, surface.eval(r1, r2)]);
        }
    }

    let n = (1.0 / BOUNDARY_STEP).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|k| surface.on_boundary(k as f64 / n as f64)).collect();
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for k in 0..=n {
        let left = if k > 0 { grid[k - 1] } else { f64::INFINITY };
        let right = if k < n { grid[k + 1] } else { f64::INFINITY };
        if grid[k] <= left && grid[k] <= right {
            let t = if k == 0 || k == n {
                k as f64 / n as f64
            } else {
                golden_section(|t| surface.on_boundary(t), (k - 1) as f64 / n as f64, (k + 1) as f64 / n as f64)
            };
            candidates.push((t, surface.on_boundary(t).min(grid[k])));
        }
    }
    let best = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let mut boundary_minima: Vec<[f64; 2]> = Vec::new();
    for (t, val) in candidates {
        let near_dup = boundary_minima.last().is_some_and(|last| (last[0] - t).abs() <= 2.0 * BOUNDARY_STEP);
        if val <= best + 1e-9 * best.abs() && !near_dup {
            boundary_minima.push([t, 1.0 - t]);
        }
    }
    CounterexampleResult { samples, boundary_minima, boundary_min_value: best }
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-12 {
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}
