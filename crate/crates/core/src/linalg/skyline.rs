use std::sync::Arc;

use super::{CsrMatrix, CsrPattern, LinalgError};

/// Symbolic part of a variable-band (skyline) Cholesky factorization: the
/// fill-reducing permutation, the row envelopes, and where each CSR entry of
/// the lower triangle lands. Built once per sparsity pattern.
#[derive(Debug, Clone)]
pub struct SkylineLayout {
    /// `perm[new] = old`.
    perm: Vec<usize>,
    inv: Vec<usize>,
    first: Vec<usize>,
    offset: Vec<usize>,
    /// Skyline position of each CSR slot, `usize::MAX` for the upper triangle.
    scatter: Vec<usize>,
    pattern: Arc<CsrPattern>,
}

impl SkylineLayout {
    pub fn new(pattern: Arc<CsrPattern>, perm: Vec<usize>) -> Self {
        let n = pattern.dim();
        assert_eq!(perm.len(), n, "permutation length");
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let first: Vec<usize> = (0..n)
            .map(|i| pattern.row(perm[i]).iter().map(|&j| inv[j]).min().unwrap_or(i).min(i))
            .collect();
        let mut offset = Vec::with_capacity(n + 1);
        offset.push(0);
        for i in 0..n {
            offset.push(offset[i] + i - first[i] + 1);
        }
        let mut scatter = vec![usize::MAX; pattern.nnz()];
        for old_i in 0..n {
            let i = inv[old_i];
            for k in pattern.row_ptr[old_i]..pattern.row_ptr[old_i + 1] {
                let j = inv[pattern.col_idx[k]];
                if j <= i {
                    scatter[k] = offset[i] + j - first[i];
                }
            }
        }
        Self { perm, inv, first, offset, scatter, pattern }
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Number of stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        *self.offset.last().unwrap_or(&0)
    }

    pub fn pattern(&self) -> &Arc<CsrPattern> {
        &self.pattern
    }

    pub fn factorize(&self, matrix: &CsrMatrix) -> Result<SkylineCholesky<'_>, LinalgError> {
        if matrix.dim() != self.dim() {
            return Err(LinalgError::Dimension { expected: self.dim(), got: matrix.dim() });
        }
        let mut data = vec![0.0; self.envelope_size()];
        for (k, &pos) in self.scatter.iter().enumerate() {
            if pos != usize::MAX {
                data[pos] = matrix.values[k];
            }
        }
        let n = self.dim();
        for i in 0..n {
            let fi = self.first[i];
            let row_i = self.offset[i];
            for j in fi..i {
                let fj = self.first[j];
                let k0 = fi.max(fj);
                let (head, tail) = data.split_at_mut(row_i);
                let lj = &head[self.offset[j] + k0 - fj..self.offset[j] + j - fj];
                let li = &tail[k0 - fi..j - fi];
                let s: f64 = li.iter().zip(lj).map(|(a, b)| a * b).sum();
                let diag_j = head[self.offset[j + 1] - 1];
                tail[j - fi] = (tail[j - fi] - s) / diag_j;
            }
            let row = &data[row_i..self.offset[i + 1]];
            let (off_diag, diag) = row.split_at(row.len() - 1);
            let pivot = diag[0] - off_diag.iter().map(|x| x * x).sum::<f64>();
            if !(pivot > 0.0) || !pivot.is_finite() {
                return Err(LinalgError::NotPositiveDefinite { row: self.perm[i], pivot });
            }
            data[self.offset[i + 1] - 1] = pivot.sqrt();
        }
        Ok(SkylineCholesky { layout: self, data })
    }
}

/// Numeric Cholesky factor `P A Pᵀ = L Lᵀ` in skyline storage.
#[derive(Debug, Clone)]
pub struct SkylineCholesky<'a> {
    layout: &'a SkylineLayout,
    data: Vec<f64>,
}

impl SkylineCholesky<'_> {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let l = self.layout;
        let n = l.dim();
        let mut y: Vec<f64> = (0..n).map(|i| rhs[l.perm[i]]).collect();
        for i in 0..n {
            let fi = l.first[i];
            let row = &self.data[l.offset[i]..l.offset[i + 1]];
            let s: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = l.first[i];
            let row = &self.data[l.offset[i]..l.offset[i + 1]];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (yk, lik) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yk -= lik * xi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in l.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }

    #[allow(dead_code)]
    pub(crate) fn inverse_permutation(&self) -> &[usize] {
        &self.layout.inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::reverse_cuthill_mckee;

    fn tridiagonal(n: usize) -> CsrMatrix {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![i];
                if i > 0 {
                    r.push(i - 1);
                }
                if i + 1 < n {
                    r.push(i + 1);
                }
                r
            })
            .collect();
        let p = Arc::new(CsrPattern::from_rows(rows));
        let mut m = CsrMatrix::zeros(p.clone());
        for i in 0..n {
            m.values[p.slot(i, i).unwrap()] = 2.0 + i as f64 * 0.1;
            if i + 1 < n {
                m.values[p.slot(i, i + 1).unwrap()] = -1.0;
                m.values[p.slot(i + 1, i).unwrap()] = -1.0;
            }
        }
        m
    }

    #[test]
    fn solves_tridiagonal_under_any_permutation() {
        let m = tridiagonal(30);
        let b: Vec<f64> = (0..30).map(|i| (i as f64).sin()).collect();
        for perm in [
            (0..30).collect::<Vec<_>>(),
            (0..30).rev().collect(),
            reverse_cuthill_mckee(&m.pattern),
        ] {
            let layout = SkylineLayout::new(m.pattern.clone(), perm);
            let x = layout.factorize(&m).unwrap().solve(&b);
            let r = m.mul_vec(&x);
            for (ri, bi) in r.iter().zip(&b) {
                assert!((ri - bi).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_indefinite() {
        let mut m = tridiagonal(5);
        let s = m.pattern.slot(2, 2).unwrap();
        m.values[s] = -3.0;
        let layout = SkylineLayout::new(m.pattern.clone(), (0..5).collect());
        assert!(matches!(layout.factorize(&m), Err(LinalgError::NotPositiveDefinite { .. })));
    }
}
