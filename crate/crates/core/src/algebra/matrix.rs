use alloc::format;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use super::RatFun;
use crate::error::{CoreError, Result};

/// Dense row-major matrix of rational functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RatFun>,
}

impl Matrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: (0..rows * cols).map(|_| RatFun::zero(nvars)).collect() }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        let mut m = Self::zeros(nvars, n, n);
        for i in 0..n {
            m[(i, i)] = RatFun::one(nvars);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> RatFun>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<RatFun>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(CoreError::Dimension(format!("ragged matrix with {} rows", r)));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatFun::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_constant(&self) -> bool {
        self.data.iter().all(RatFun::is_constant)
    }

    pub fn entries(&self) -> impl Iterator<Item = &RatFun> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(CoreError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let nvars = self.data.first().map_or(0, RatFun::nvars);
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = RatFun::zero(nvars);
            for k in 0..self.cols {
                let a = &self[(i, k)];
                let b = &other[(k, j)];
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    /// Inverse by Gauss-Jordan elimination over the field of rational
    /// functions, pivoting on the entry with the fewest terms.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(CoreError::Dimension(format!("{}x{} matrix is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let nvars = self.data.first().map_or(0, RatFun::nvars);
        let mut a = self.clone();
        let mut inv = Matrix::identity(nvars, n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .min_by_key(|&r| a[(r, col)].numer().len() + a[(r, col)].denom().len())
                .ok_or(CoreError::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p_inv = a[(col, col)].recip()?;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &p_inv;
                inv[(col, j)] = &inv[(col, j)] * &p_inv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    if !a[(col, j)].is_zero() {
                        a[(r, j)] = &a[(r, j)] - &(&factor * &a[(col, j)]);
                    }
                    if !inv[(col, j)].is_zero() {
                        inv[(r, j)] = &inv[(r, j)] - &(&factor * &inv[(col, j)]);
                    }
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = RatFun;
    fn index(&self, (i, j): (usize, usize)) -> &RatFun {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatFun {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;
    use alloc::vec;

    #[test]
    fn identity_and_antidiagonal_are_involutions() {
        let id = Matrix::identity(3, 3);
        assert_eq!(id.inverse().unwrap(), id);
        let anti = Matrix::from_fn(3, 3, |i, j| if i + j == 2 { RatFun::one(3) } else { RatFun::zero(3) });
        assert_eq!(anti.inverse().unwrap(), anti);
    }

    #[test]
    fn singular_matrix() {
        let u = RatFun::var(2, 0);
        let m = Matrix::from_rows(vec![vec![u.clone(), u.clone()], vec![u.clone(), u]]).unwrap();
        assert_eq!(m.inverse(), Err(CoreError::Singular));
    }

    #[test]
    fn symbolic_two_by_two() {
        let u1 = RatFun::var(2, 0);
        let u2 = RatFun::var(2, 1);
        let m = Matrix::from_rows(vec![
            vec![u1.clone(), RatFun::one(2)],
            vec![RatFun::constant(2, rational(1, 2)), u2.clone()],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2, 2));
        // det = u1 u2 - 1/2
        let det = &(&u1 * &u2) - &RatFun::constant(2, rational(1, 2));
        let expected = u2.checked_div(&det).unwrap();
        assert_eq!(inv[(0, 0)], expected);
    }
}
