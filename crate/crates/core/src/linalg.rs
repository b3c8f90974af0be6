//! Small dense exact-rational matrices: products, inverses, rank.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{ell, ell_prime, LatticeVector};
use crate::rational::{half, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_lattice_rows(rows: &[LatticeVector]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.entries().to_vec()).collect())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Row-echelon rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(pivot) = (rank..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(rank, pivot);
            for r in rank + 1..a.rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &a[(rank, col)];
                for c in col..a.cols {
                    let delta = &factor * &a[(rank, c)];
                    a[(r, c)] -= delta;
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    /// Gauss–Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] /= &p;
                inv[(col, c)] /= &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for c in 0..n {
                    let da = &factor * &a[(col, c)];
                    a[(r, c)] -= da;
                    let di = &factor * &inv[(col, c)];
                    inv[(r, c)] -= di;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The matrix `L` whose rows are `ℓ_0, …, ℓ_m`.
pub fn ell_matrix(m: usize) -> Result<Matrix> {
    let rows = (0..=m).map(|i| ell(i, m)).collect::<Result<Vec<_>>>()?;
    Matrix::from_lattice_rows(&rows)
}

/// The matrix `L'` whose rows are `ℓ'_0, …, ℓ'_m`.
pub fn ell_prime_matrix(m: usize) -> Result<Matrix> {
    let rows = (0..=m).map(|i| ell_prime(i, m)).collect::<Result<Vec<_>>>()?;
    Matrix::from_lattice_rows(&rows)
}

/// The transition matrix `T` with `L' = T·L`, read off from the definition
/// of the `ℓ'` basis.
pub fn ell_prime_transition(m: usize) -> Result<Matrix> {
    crate::lattice::check_m(m)?;
    let mut t = Matrix::zeros(m + 1, m + 1);
    for i in 0..m {
        t[(i, i)] = half();
        t[(i, i + 1)] = -half();
    }
    t[(m, 0)] = half();
    t[(m, m)] += half();
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn inverse_round_trip() {
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert_eq!(inv[(0, 0)], frac(1, 1));
        assert_eq!(inv[(0, 1)], frac(-1, 1));
    }

    #[test]
    fn singular_has_no_inverse() {
        let a = Matrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(a.inverse().is_none());
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn rank_of_wide_matrix() {
        let a = Matrix::from_i64(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 2]]).unwrap();
        assert_eq!(a.rank(), 2);
        assert_eq!(ell_matrix(3).unwrap().rank(), 4);
    }
}
