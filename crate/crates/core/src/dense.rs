//! Small dense symmetric matrices and their inertia.
//!
//! Everything here is desk-scale (dimensions in the tens). Floating-point
//! inertia goes through Householder tridiagonalization followed by the Sturm
//! pivot count; exact inertia uses symmetrically pivoted congruence
//! elimination, which needs no square roots and is valid for any [`Scalar`].

// indexed loops mirror the matrix algebra
#![allow(clippy::needless_range_loop)]

use crate::jacobi::{sturm_negative_count, SymTridiag};
use crate::scalar::{Scalar, Tol};

/// Row-major rectangular matrix over any scalar backend.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Dense<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Dense { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Dense::zero(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Dense { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: S) {
        let cur = self.get(r, c).clone();
        self.set(r, c, cur + v);
    }

    pub fn matmul(&self, other: &Dense<S>) -> Dense<S> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Dense::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc + self.get(r, k).clone() * other.get(k, c).clone();
            }
            acc
        })
    }

    pub fn transpose(&self) -> Dense<S> {
        Dense::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn sub(&self, other: &Dense<S>) -> Dense<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Dense::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).clone() - other.get(r, c).clone()
        })
    }

    /// Largest |entry|, as f64; used to scale comparisons.
    pub fn entry_scale(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
            .max(1.0)
    }

    pub fn max_abs_diff(&self, other: &Dense<S>) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, abs_tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                let d = (self.get(r, c).clone() - self.get(c, r).clone()).to_f64();
                if d.abs() > abs_tol {
                    return false;
                }
            }
        }
        true
    }

    /// Simultaneous row/column permutation: out[i][j] = self[perm[i]][perm[j]].
    pub fn permute_sym(&self, perm: &[usize]) -> Dense<S> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(perm.len(), self.rows);
        Dense::from_fn(self.rows, self.cols, |r, c| self.get(perm[r], perm[c]).clone())
    }

    /// Rank-one congruence update: self += weight * v v^T.
    pub fn add_outer(&mut self, weight: &S, v: &[S]) {
        assert_eq!(self.rows, self.cols);
        assert_eq!(v.len(), self.rows);
        for r in 0..self.rows {
            if v[r] == S::zero() {
                continue;
            }
            for c in 0..self.cols {
                if v[c] == S::zero() {
                    continue;
                }
                self.add_to(r, c, weight.clone() * v[r].clone() * v[c].clone());
            }
        }
    }

    fn swap_sym(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }
}

impl Dense<f64> {
    /// Determinant by partial-pivoted LU. Fine at desk scale.
    pub fn determinant(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let mut piv = k;
            for r in (k + 1)..n {
                if a[r * n + k].abs() > a[piv * n + k].abs() {
                    piv = r;
                }
            }
            if a[piv * n + k] == 0.0 {
                return 0.0;
            }
            if piv != k {
                for c in 0..n {
                    a.swap(k * n + c, piv * n + c);
                }
                det = -det;
            }
            det *= a[k * n + k];
            for r in (k + 1)..n {
                let f = a[r * n + k] / a[k * n + k];
                for c in k..n {
                    a[r * n + c] -= f * a[k * n + c];
                }
            }
        }
        det
    }

    /// Orthogonal reduction of a symmetric matrix to tridiagonal form.
    pub fn tridiagonalize(&self) -> SymTridiag<f64> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let at = |a: &Vec<f64>, r: usize, c: usize| a[r * n + c];

        for k in 0..n.saturating_sub(2) {
            let m = n - k - 1; // trailing column length below the diagonal
            let mut x = vec![0.0; m];
            for i in 0..m {
                x[i] = at(&a, k + 1 + i, k);
            }
            let sigma = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if sigma == 0.0 {
                continue;
            }
            let alpha = if x[0] >= 0.0 { -sigma } else { sigma };
            let mut v = x.clone();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|e| e * e).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            let beta = 2.0 / vnorm2;

            // column/row k
            a[(k + 1) * n + k] = alpha;
            a[k * n + k + 1] = alpha;
            for i in 1..m {
                a[(k + 1 + i) * n + k] = 0.0;
                a[k * n + (k + 1 + i)] = 0.0;
            }

            // trailing block B <- (I - beta v v^T) B (I - beta v v^T)
            let mut p = vec![0.0; m];
            for i in 0..m {
                let mut acc = 0.0;
                for j in 0..m {
                    acc += at(&a, k + 1 + i, k + 1 + j) * v[j];
                }
                p[i] = beta * acc;
            }
            let vtp: f64 = v.iter().zip(&p).map(|(vi, pi)| vi * pi).sum();
            let w: Vec<f64> = p
                .iter()
                .zip(&v)
                .map(|(pi, vi)| pi - 0.5 * beta * vtp * vi)
                .collect();
            for i in 0..m {
                for j in 0..m {
                    a[(k + 1 + i) * n + (k + 1 + j)] -= v[i] * w[j] + w[i] * v[j];
                }
            }
        }

        let diag: Vec<f64> = (0..n).map(|i| at(&a, i, i)).collect();
        let offdiag: Vec<f64> = (0..n.saturating_sub(1)).map(|i| at(&a, i, i + 1)).collect();
        SymTridiag::new(diag, offdiag).expect("tridiagonalization yields consistent lengths")
    }

    /// Number of eigenvalues strictly below zero.
    pub fn negative_count(&self, tol: &Tol) -> usize {
        let tri = self.tridiagonalize();
        sturm_negative_count(&tri, &0.0, tol)
    }
}

/// Inertia (negative, zero, positive eigenvalue counts) by symmetrically
/// pivoted congruence elimination. Exact for exact scalars; for floats the
/// zero decisions use `tol`.
pub fn inertia_congruence<S: Scalar>(m: &Dense<S>, tol: &Tol) -> (usize, usize, usize) {
    assert_eq!(m.rows(), m.cols());
    let mut a = m.clone();
    let n = a.rows();
    let (mut neg, mut zero, mut pos) = (0usize, 0usize, 0usize);
    let mut k = 0usize;

    while k < n {
        // largest remaining diagonal entry
        let mut best = k;
        for i in (k + 1)..n {
            if a.get(i, i).clone().abs().to_f64() > a.get(best, best).clone().abs().to_f64() {
                best = i;
            }
        }
        if !a.get(best, best).is_negligible(tol) {
            a.swap_sym(k, best);
            let pivot = a.get(k, k).clone();
            if pivot.is_negative() {
                neg += 1;
            } else {
                pos += 1;
            }
            // full-row update keeps the trailing block symmetric
            for r in (k + 1)..n {
                let f = a.get(r, k).clone() / pivot.clone();
                if f == S::zero() {
                    continue;
                }
                for c in (k + 1)..n {
                    let delta = f.clone() * a.get(k, c).clone();
                    let cur = a.get(r, c).clone();
                    a.set(r, c, cur - delta);
                }
            }
            k += 1;
            continue;
        }

        // all remaining diagonals negligible: find the largest off-diagonal
        let (mut bi, mut bj, mut bmag) = (0usize, 0usize, -1.0f64);
        for i in k..n {
            for j in (i + 1)..n {
                let mag = a.get(i, j).to_f64().abs();
                if mag > bmag {
                    (bi, bj, bmag) = (i, j, mag);
                }
            }
        }
        if bmag < 0.0 || a.get(bi, bj).is_negligible(tol) {
            zero += n - k;
            break;
        }

        // 2x2 pivot [[~0, b], [b, ~0]]: one negative and one positive square
        a.swap_sym(k, bi);
        a.swap_sym(k + 1, bj);
        neg += 1;
        pos += 1;
        let (p11, p12, p22) = (
            a.get(k, k).clone(),
            a.get(k, k + 1).clone(),
            a.get(k + 1, k + 1).clone(),
        );
        let det = p11.clone() * p22.clone() - p12.clone() * p12.clone();
        for r in (k + 2)..n {
            let (c1, c2) = (a.get(r, k).clone(), a.get(r, k + 1).clone());
            // [c1 c2] * inv(P), with inv(P) = [[p22, -p12], [-p12, p11]] / det
            let f1 = (c1.clone() * p22.clone() - c2.clone() * p12.clone()) / det.clone();
            let f2 = (c2.clone() * p11.clone() - c1.clone() * p12.clone()) / det.clone();
            for c in (k + 2)..n {
                let delta =
                    f1.clone() * a.get(k, c).clone() + f2.clone() * a.get(k + 1, c).clone();
                let cur = a.get(r, c).clone();
                a.set(r, c, cur - delta);
            }
        }
        k += 2;
    }

    (neg, zero, pos)
}
