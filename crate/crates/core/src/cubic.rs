//! Real roots of cubic polynomials.
//!
//! Everything is routed through the depressed form `t^3 + p t + q = 0`,
//! using the trigonometric solution when there are three real roots and
//! Cardano's formula otherwise. Each root gets a single Newton polish on the
//! polynomial it came from.

use std::f64::consts::PI;

/// Real roots of `t^3 + p t + q = 0`, sorted in descending order.
///
/// Repeated roots are reported once per multiplicity the discriminant
/// resolves, so a double root shows up twice.
pub fn depressed_real_roots(p: f64, q: f64) -> Vec<f64> {
    let mut roots = if p == 0.0 {
        vec![(-q).cbrt()]
    } else {
        // 4p^3 + 27q^2 < 0  <=>  three distinct real roots
        let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
        if disc < 0.0 {
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            (0..3)
                .map(|k| m * (phi - 2.0 * PI * k as f64 / 3.0).cos())
                .collect()
        } else if disc == 0.0 {
            let r = (q / 2.0).cbrt();
            vec![-2.0 * r, r, r]
        } else {
            // one real root; pick the sign that avoids cancellation
            let s = disc.sqrt();
            let a = -(q / 2.0) - s.copysign(q);
            let u = a.cbrt();
            let v = if u == 0.0 { 0.0 } else { -p / (3.0 * u) };
            vec![u + v]
        }
    };
    for t in roots.iter_mut() {
        *t = newton_polish(*t, |x| ((x * x + p) * x + q, 3.0 * x * x + p));
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// Real roots of `x^3 + b x^2 + c x + d = 0`, sorted in descending order.
pub fn monic_real_roots(b: f64, c: f64, d: f64) -> Vec<f64> {
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let mut roots: Vec<f64> = depressed_real_roots(p, q)
        .into_iter()
        .map(|t| t - shift)
        .collect();
    for x in roots.iter_mut() {
        *x = newton_polish(*x, |x| {
            (((x + b) * x + c) * x + d, (3.0 * x + 2.0 * b) * x + c)
        });
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

fn newton_polish(x: f64, f: impl Fn(f64) -> (f64, f64)) -> f64 {
    let (val, der) = f(x);
    if der == 0.0 || !der.is_finite() {
        return x;
    }
    let next = x - val / der;
    // keep the polish only if it does not make the residual worse
    if next.is_finite() && f(next).0.abs() <= val.abs() {
        next
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_roots(found: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(found.len(), expected.len(), "{found:?} vs {expected:?}");
        for (a, b) in found.iter().zip(expected) {
            assert!((a - b).abs() <= tol, "{found:?} vs {expected:?}");
        }
    }

    #[test]
    fn three_real_roots() {
        // (x-3)(x-1)(x+2) = x^3 - 2x^2 - 5x + 6
        assert_roots(&monic_real_roots(-2.0, -5.0, 6.0), &[3.0, 1.0, -2.0], 1e-12);
    }

    #[test]
    fn single_real_root() {
        // (x-2)(x^2+1) = x^3 - 2x^2 + x - 2
        assert_roots(&monic_real_roots(-2.0, 1.0, -2.0), &[2.0], 1e-12);
    }

    #[test]
    fn pure_cube() {
        assert_roots(&depressed_real_roots(0.0, -8.0), &[2.0], 1e-14);
    }

    #[test]
    fn double_root() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let r = depressed_real_roots(-3.0, 2.0);
        assert_roots(&r, &[1.0, 1.0, -2.0], 1e-7);
    }

    #[test]
    fn wide_magnitude_range() {
        // (x - 1e4)(x - 1e-4)(x + 1)
        let (r1, r2, r3) = (1e4, 1e-4, -1.0);
        let b = -(r1 + r2 + r3);
        let c = r1 * r2 + r1 * r3 + r2 * r3;
        let d = -r1 * r2 * r3;
        let roots = monic_real_roots(b, c, d);
        assert_eq!(roots.len(), 3);
        assert!((roots[0] - r1).abs() <= 1e-8 * r1);
        assert!((roots[2] - r3).abs() <= 1e-8);
    }
}
