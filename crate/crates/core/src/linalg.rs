//! Dense matrices over a [`Field`], row-major.
//!
//! Everything is plain Gaussian elimination. Exact fields pivot on the
//! first nonzero entry; the floating field pivots on the entry of largest
//! magnitude and treats entries below `eps` as zero.

use crate::error::{Error, Result};
use crate::scalar::Field;
use std::fmt;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, PartialEq)]
pub struct Mat<F: Field> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self[(r, c)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Mat<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::input("ragged matrix rows"));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix apply");
        (0..self.rows).map(|r| crate::scalar::dot(self.row(r), v)).collect()
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut m = self.clone();
        for e in &mut m.data {
            *e = e.clone() * s.clone();
        }
        m
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.data.iter().all(|e| e.near_zero(eps))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|e| e.magnitude()).fold(0.0, f64::max)
    }

    /// Stack `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `self` left of `other` (same row count).
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    /// Row echelon form in place; returns pivot column indices.
    fn echelonize(&mut self, eps: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // pivot search: largest magnitude for floats, first nonzero for exact
            let mut best: Option<usize> = None;
            for r in row..self.rows {
                if !self[(r, col)].near_zero(eps) {
                    if F::EXACT {
                        best = Some(r);
                        break;
                    }
                    match best {
                        Some(b) if self[(b, col)].magnitude() >= self[(r, col)].magnitude() => {}
                        _ => best = Some(r),
                    }
                }
            }
            let Some(p) = best else { continue };
            self.swap_rows(row, p);
            let inv = self[(row, col)].inv().expect("pivot invertible");
            for c in col..self.cols {
                self[(row, c)] = self[(row, c)].clone() * inv.clone();
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for c in col..self.cols {
                        let v = self[(r, c)].clone() - factor.clone() * self[(row, c)].clone();
                        self[(r, c)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self, eps: f64) -> usize {
        let mut m = self.clone();
        m.echelonize(eps).len()
    }

    /// Basis of the null space, one vector per column of the result.
    pub fn kernel_basis(&self, eps: f64) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.echelonize(eps);
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![F::zero(); self.cols];
            v[fc] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(r, fc)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `self * x = b` for one consistent solution. Returns `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[F], eps: f64) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let pivots = aug.echelonize(eps);
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Solve `self * X = B` for all columns of `B` at once; `None` if any
    /// column is inconsistent.
    pub fn solve_matrix(&self, b: &Mat<F>, eps: f64) -> Option<Mat<F>> {
        assert_eq!(b.rows, self.rows);
        let mut cols = Vec::with_capacity(b.cols);
        for c in 0..b.cols {
            cols.push(self.solve(&b.col(c), eps)?);
        }
        let mut out = Mat::zeros(self.cols, b.cols);
        for (c, v) in cols.iter().enumerate() {
            for r in 0..self.cols {
                out[(r, c)] = v[r].clone();
            }
        }
        Some(out)
    }

    pub fn inverse(&self, eps: f64) -> Option<Mat<F>> {
        if self.rows != self.cols {
            return None;
        }
        let id = Mat::identity(self.rows);
        let x = self.solve_matrix(&id, eps)?;
        if (x.clone() * self.clone()).sub_mat(&id).is_zero(eps) {
            Some(x)
        } else {
            None
        }
    }

    pub fn sub_mat(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() - other[(r, c)].clone()
        })
    }

    /// Columns of `cols` as a matrix (basis-matrix constructor).
    pub fn from_cols(n: usize, cols: &[Vec<F>]) -> Self {
        Self::from_fn(n, cols.len(), |r, c| cols[c][r].clone())
    }

    /// Does `v` lie in the column span? (rank test)
    pub fn contains_in_span(&self, v: &[F], eps: f64) -> bool {
        let ext = self.hstack(&Mat::from_cols(self.rows, &[v.to_vec()]));
        ext.rank(eps) == self.rank(eps)
    }

    /// Characteristic polynomial coefficients, lowest degree first, by the
    /// Faddeev-LeVerrier recursion. Exact over exact fields.
    pub fn char_poly(&self) -> Vec<F> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // p(x) = x^n + c_{n-1} x^{n-1} + ... + c_0
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = F::one();
        // invariant: am = A * M_k, with M_1 = I and
        // M_{k+1} = A M_k + c_{n-k} I
        let mut am = self.clone();
        for k in 1..=n {
            let mut tr = F::zero();
            for i in 0..n {
                tr = tr + am[(i, i)].clone();
            }
            let inv_k = F::from_i64(k as i64).inv().expect("char 0 field");
            let c = -(tr * inv_k);
            coeffs[n - k] = c.clone();
            if k < n {
                let mut next = am;
                for i in 0..n {
                    next[(i, i)] = next[(i, i)].clone() + c.clone();
                }
                am = self.clone() * next;
            }
        }
        coeffs
    }
}

impl<F: Field> Mul for Mat<F> {
    type Output = Mat<F>;
    fn mul(self, rhs: Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out: Mat<F> = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = out[(r, c)].clone() + a.clone() * rhs[(k, c)].clone();
                    out[(r, c)] = v;
                }
            }
        }
        out
    }
}

impl<F: Field> Add for Mat<F> {
    type Output = Mat<F>;
    fn add(self, rhs: Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + rhs[(r, c)].clone()
        })
    }
}

impl<F: Field> Sub for Mat<F> {
    type Output = Mat<F>;
    fn sub(self, rhs: Mat<F>) -> Mat<F> {
        self.sub_mat(&rhs)
    }
}

/// Euclidean norm of a vector, as a float (report-grade, not exact).
pub fn vec_norm<F: Field>(v: &[F]) -> f64 {
    v.iter().map(|e| e.magnitude().powi(2)).sum::<f64>().sqrt()
}

pub fn vec_sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_scale<F: Field>(s: &F, v: &[F]) -> Vec<F> {
    v.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn vec_is_zero<F: Field>(v: &[F], eps: f64) -> bool {
    v.iter().all(|e| e.near_zero(eps))
}
