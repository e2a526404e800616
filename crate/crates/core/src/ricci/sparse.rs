//! Compressed sparse row matrix with a Jacobi-preconditioned conjugate
//! gradient solver. Enough for the symmetric positive definite systems of the
//! flow; deterministic iteration order throughout.

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    /// Zero matrix with the given sparsity pattern. Each row's columns must be
    /// sorted and unique.
    pub fn with_pattern(rows: &[Vec<usize>]) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        for r in rows {
            debug_assert!(r.windows(2).all(|w| w[0] < w[1]));
            cols.extend_from_slice(r);
            row_ptr.push(cols.len());
        }
        let nnz = cols.len();
        Self { n: rows.len(), row_ptr, cols, vals: vec![T::zero(); nnz] }
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        row.binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }

    /// Adds `v` at `(i, j)`; the entry must be in the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let k = self.slot(i, j).expect("entry outside sparsity pattern");
        self.vals[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.slot(i, j).map_or(T::zero(), |k| self.vals[k])
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `y = (A + shift I) x`
    pub fn mul_shifted(&self, x: &[T], shift: T, y: &mut [T]) {
        for i in 0..self.n {
            let mut s = shift * x[i];
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            y[i] = s;
        }
    }

    /// Largest `|A_ij - A_ji|` relative to the largest entry.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        let mut scale = T::zero();
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[k];
                scale = scale.max(self.vals[k].abs());
                worst = worst.max((self.vals[k] - self.get(j, i)).abs());
            }
        }
        if scale > T::zero() {
            worst / scale
        } else {
            T::zero()
        }
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

/// Solves `(A + shift I) x = b` for symmetric positive definite `A + shift I`.
/// Returns `None` on loss of positive definiteness or when the relative
/// residual does not reach `rel_tol` (a looser bound is accepted if the
/// iteration budget runs out).
pub fn solve_pcg<T: Real>(a: &CsrMatrix<T>, b: &[T], shift: T, rel_tol: T, max_iter: usize) -> Option<Vec<T>> {
    let n = a.n;
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![T::zero(); n];
    if bnorm == T::zero() {
        return Some(x);
    }
    let inv_diag: Vec<T> = a
        .diagonal()
        .into_iter()
        .map(|d| if d + shift > T::zero() { (d + shift).recip() } else { T::nan() })
        .collect();
    if inv_diag.iter().any(|d| d.is_nan()) {
        return None;
    }
    let mut r = b.to_vec();
    let mut z: Vec<T> = r.iter().zip(&inv_diag).map(|(&r, &d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![T::zero(); n];
    let mut rz = dot(&r, &z);
    let target = rel_tol * bnorm;
    for _ in 0..max_iter {
        a.mul_shifted(&p, shift, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > T::zero()) {
            return None;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if dot(&r, &r).sqrt() <= target {
            return Some(x);
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rel = dot(&r, &r).sqrt() / bnorm;
    (rel.is_finite() && rel <= T::lit(1e-6).max(rel_tol)).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> CsrMatrix<f64> {
        let rows: Vec<Vec<usize>> =
            (0..n).map(|i| (i.saturating_sub(1)..=(i + 1).min(n - 1)).collect()).collect();
        let mut m = CsrMatrix::with_pattern(&rows);
        for i in 0..n {
            m.add(i, i, 2.0 + 0.01 * i as f64);
            if i + 1 < n {
                m.add(i, i + 1, -1.0);
                m.add(i + 1, i, -1.0);
            }
        }
        m
    }

    #[test]
    fn solves_a_tridiagonal_system() {
        let m = laplacian_1d(50);
        let x_true: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut b = vec![0.0; 50];
        m.mul_shifted(&x_true, 0.0, &mut b);
        let x = solve_pcg(&m, &b, 0.0, 1e-13, 500).unwrap();
        for (a, e) in x.iter().zip(&x_true) {
            assert!((a - e).abs() < 1e-10);
        }
        assert_eq!(m.asymmetry(), 0.0);
    }

    #[test]
    fn rejects_indefinite_systems() {
        let mut m = CsrMatrix::with_pattern(&[vec![0, 1], vec![0, 1]]);
        m.add(0, 0, 1.0);
        m.add(1, 1, -1.0);
        assert!(solve_pcg(&m, &[1.0, 1.0], 0.0, 1e-12, 10).is_none());
    }
}
