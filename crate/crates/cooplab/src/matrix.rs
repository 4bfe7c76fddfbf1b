//! Dense row-major matrices over a [`Scalar`] backend.
//!
//! Payoff matrices here are small (single-digit dimensions), so a plain
//!`Vec` with explicit loops beats pulling in a linear-algebra crate that
//! cannot hold arbitrary-precision rationals without friction.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::DimensionMismatch {
                expected_rows: 1,
                expected_cols: 1,
                got_rows: rows.len(),
                got_cols: rows.first().map_or(0, Vec::len),
            });
        }
        let cols = rows[0].len();
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected_rows: rows.len(),
                    expected_cols: cols,
                    got_rows: rows.len(),
                    got_cols: r.len(),
                });
            }
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        assert!(rows >= 1 && cols >= 1);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| S::from_int(rows[i][j]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map(&self, f: impl FnMut(&S) -> S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn map_to<T: Scalar>(&self, f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn row_sums(&self) -> Vec<S> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(S::zero(), |acc, v| acc + v.clone())
            })
            .collect()
    }

    pub fn col_sums(&self) -> Vec<S> {
        let mut sums = vec![S::zero(); self.cols];
        for i in 0..self.rows {
            for (j, s) in sums.iter_mut().enumerate() {
                *s = s.clone() + self.get(i, j).clone();
            }
        }
        sums
    }

    pub fn row_means(&self) -> Vec<S> {
        let n = S::from_int(self.cols as i64);
        self.row_sums().into_iter().map(|s| s / n.clone()).collect()
    }

    pub fn col_means(&self) -> Vec<S> {
        let m = S::from_int(self.rows as i64);
        self.col_sums().into_iter().map(|s| s / m.clone()).collect()
    }

    pub fn grand_mean(&self) -> S {
        let total = self
            .data
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone());
        total / S::from_int((self.rows * self.cols) as i64)
    }

    /// `M . v` for a column vector `v` of length `cols`.
    pub fn matvec(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.rows];
        self.matvec_into(v, &mut out);
        out
    }

    pub fn matvec_into(&self, v: &[S], out: &mut [S]) {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        assert_eq!(out.len(), self.rows, "output length mismatch");
        for (i, o) in out.iter_mut().enumerate() {
            *o = self
                .row(i)
                .iter()
                .zip(v)
                .fold(S::zero(), |acc, (a, x)| acc + a.clone() * x.clone());
        }
    }

    /// `v^T . M` for a row vector `v` of length `rows`.
    pub fn vecmat(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.cols];
        self.vecmat_into(v, &mut out);
        out
    }

    pub fn vecmat_into(&self, v: &[S], out: &mut [S]) {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        assert_eq!(out.len(), self.cols, "output length mismatch");
        for o in out.iter_mut() {
            *o = S::zero();
        }
        for (i, weight) in v.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.clone() + weight.clone() * self.get(i, j).clone();
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero_value())
    }

    pub fn max_abs(&self) -> S {
        let mut best = S::zero();
        for v in &self.data {
            let a = v.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(S::is_finite)
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<S: Scalar> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        self.get(i, j)
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}{}", self.get(i, j), if j + 1 < self.cols { ", " } else { "" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
