//! Small dense matrices over a generic scalar.
//!
//! Ranks here never exceed 8, so everything is a plain row-major `Vec`.

use std::ops::{Index, IndexMut};

use serde::{Serialize, Serializer};

use crate::scalar::{Field, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| rows[i][j].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// `u^T M v`.
    pub fn bilinear(&self, u: &[T], v: &[T]) -> T {
        u.iter().zip(self.mul_vec(v)).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - rhs[(i, j)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = pivot_row(&a, col) else {
                return T::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let piv = a[(col, col)].clone();
            det = det * piv.clone();
            for r in col + 1..n {
                let factor = a[(r, col)].clone() / piv.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - factor.clone() * v;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = pivot_row(&a, col)?;
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let piv = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / piv.clone();
                inv[(col, c)] = inv[(col, c)].clone() / piv.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let va = a[(col, c)].clone();
                    let vi = inv[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - factor.clone() * va;
                    inv[(r, c)] = inv[(r, c)].clone() - factor.clone() * vi;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

fn pivot_row<T: Field>(a: &Matrix<T>, col: usize) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for r in col..a.rows {
        let v = a[(r, col)].abs();
        if v.is_zero() {
            continue;
        }
        match &best {
            Some((_, b)) if *b >= v => {}
            _ => best = Some((r, v)),
        }
    }
    best.map(|(r, _)| r)
}

impl<T: Real> Matrix<T> {
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Serialize + Clone> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Clone, Debug)]
pub struct Cholesky<T> {
    lower: Matrix<T>,
}

impl<T: Real> Cholesky<T> {
    /// Returns `None` if the matrix is not (numerically) positive definite.
    pub fn new(m: &Matrix<T>) -> Option<Self> {
        let n = m.rows();
        assert_eq!(n, m.cols());
        let mut l = Matrix::from_fn(n, n, |_, _| T::zero());
        for j in 0..n {
            let mut d = m[(j, j)];
            for k in 0..j {
                d = d - l[(j, k)] * l[(j, k)];
            }
            if !(d > T::zero()) {
                return None;
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in j + 1..n {
                let mut s = m[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Some(Self { lower: l })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lower.rows();
        let l = &self.lower;
        let mut y = vec![T::zero(); n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s = s - l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s = s - l[(k, i)] * x[k];
            }
            x[i] = s / l[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> Matrix<T> {
        let n = self.lower.rows();
        let mut out = Matrix::from_fn(n, n, |_, _| T::zero());
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let col = self.solve(&e);
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        out
    }

    pub fn log_det(&self) -> T {
        let n = self.lower.rows();
        (0..n).map(|i| self.lower[(i, i)].ln()).sum::<T>() * T::lit(2.0)
    }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn rational_inverse_of_a2_cartan() {
        let c: Matrix<Rational> = Matrix::from_rows(&[
            vec![rat(2, 1), rat(-1, 1)],
            vec![rat(-1, 1), rat(2, 1)],
        ]);
        let inv = c.inverse().unwrap();
        assert_eq!(inv.to_rows(), vec![vec![rat(2, 3), rat(1, 3)], vec![rat(1, 3), rat(2, 3)]]);
        assert_eq!(c.determinant(), rat(3, 1));
        assert_eq!(c.mul(&inv), Matrix::identity(2));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m: Matrix<Rational> =
            Matrix::from_rows(&[vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]]);
        assert!(m.inverse().is_none());
        assert_eq!(m.determinant(), rat(0, 1));
    }

    #[test]
    fn cholesky_solves_and_logdets() {
        let m = Matrix::from_rows(&[vec![4.0f64, 2.0], vec![2.0, 3.0]]);
        let ch = Cholesky::new(&m).unwrap();
        let x = ch.solve(&[2.0, 1.0]);
        let back = m.mul_vec(&x);
        assert!((back[0] - 2.0).abs() < 1e-14 && (back[1] - 1.0).abs() < 1e-14);
        assert!((ch.log_det() - 8.0f64.ln()).abs() < 1e-14);
        assert!(Cholesky::new(&Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]])).is_none());
    }
}
