//! Dense square matrices of [`Scalar`]s.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: alloc::vec![Scalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Builds from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(Scalar::is_exact)
    }

    /// First `(i, j)` with `a_ij != a_ji`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn check_symmetric(&self) -> Result<()> {
        match self.asymmetry() {
            Some((i, j)) => Err(Error::Asymmetric(i, j)),
            None => Ok(()),
        }
    }

    /// Principal submatrix on the given (ordered) index list.
    pub fn principal(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), |i, j| self[(idx[i], idx[j])].clone())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(Scalar::to_f64).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let mut first = true;
            for x in row {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{}", x)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
