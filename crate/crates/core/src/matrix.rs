//! Dense row-major matrices. Integer matrices (exchange matrices, C/G
//! matrices, presentation matrices) use arbitrary-precision entries because
//! products along long paths overflow machine integers quickly.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Rational, TropScalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nr * nc);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != nc {
                return Err(MatrixError::Ragged {
                    row: i,
                    found: r.len(),
                    expected: nc,
                });
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: nr,
            cols: nc,
            data,
        })
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// The submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Permutation matrix with a 1 in position `(images[i], i)`, so that
    /// `(P x)[images[i]] = x[i]`.
    pub fn permutation(images: &[usize]) -> Self {
        Matrix::from_fn(images.len(), images.len(), |r, c| {
            if images[c] == r {
                T::one()
            } else {
                T::zero()
            }
        })
    }
}

impl<T: Clone + Zero + Add<Output = T> + Mul<Output = T>> Matrix<T> {
    pub fn try_mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::from_fn(self.rows, rhs.cols, |_, _| T::zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let cur = std::mem::replace(&mut out[(i, j)], T::zero());
                        out[(i, j)] = cur + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }
}

impl<T: Clone + Zero + Add<Output = T> + Mul<Output = T>> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on a dimension mismatch; use [`Matrix::try_mul`] otherwise.
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (i..self.cols).all(|j| self[(i, j)] == -&self[(j, i)]))
    }

    /// Determinant by fraction-free Gaussian elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn to_rational(&self) -> Matrix<Rational> {
        self.map(|v| Rational::from_integer(v.clone()))
    }

    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(<f64 as TropScalar>::from_integer)
    }

    /// Inverse of a matrix with determinant ±1, returned over the integers.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix, MatrixError> {
        let inv = self.to_rational().inverse()?;
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = &inv[(i, j)];
                if !v.is_integer() {
                    return Err(MatrixError::Dimension(
                        "inverse is not integral".to_string(),
                    ));
                }
                out[(i, j)] = v.to_integer();
            }
        }
        Ok(out)
    }
}

impl<S: TropScalar> Matrix<S> {
    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[S]) -> Result<Vec<S>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::Dimension(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Gauss-Jordan inverse over an exact field.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<S>::identity(n);
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[(r, c)].is_zero())
                .ok_or(MatrixError::Singular)?;
            if p != c {
                for j in 0..n {
                    a.data.swap(c * n + j, p * n + j);
                    inv.data.swap(c * n + j, p * n + j);
                }
            }
            let piv = a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] = a[(c, j)].clone() / piv.clone();
                inv[(c, j)] = inv[(c, j)].clone() / piv.clone();
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(c, j)].clone();
                    inv[(r, j)] = inv[(r, j)].clone() - f.clone() * inv[(c, j)].clone();
                }
            }
        }
        Ok(inv)
    }
}

/// Multiply an integer matrix into a vector of scalars.
pub fn int_apply<S: TropScalar>(m: &IntMatrix, v: &[S]) -> Result<Vec<S>, MatrixError> {
    if v.len() != m.cols() {
        return Err(MatrixError::Dimension(format!(
            "{}x{} matrix applied to a vector of length {}",
            m.rows(),
            m.cols(),
            v.len()
        )));
    }
    Ok((0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .fold(S::zero(), |acc, (a, b)| acc + b.scale_int(a))
        })
        .collect())
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Entries are written as JSON integers, or as decimal strings once they
/// leave the 64-bit range.
impl Serialize for IntMatrix {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        let rows: Vec<Vec<serde_json::Value>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(int_to_json).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(int_from_json).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for integer vectors, using the same encoding as matrix
/// entries.
pub(crate) mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(int_to_json).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<serde_json::Value>::deserialize(d)?
            .iter()
            .map(int_from_json)
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}

pub(crate) fn int_to_json(v: &BigInt) -> serde_json::Value {
    match i64::try_from(v) {
        Ok(x) => serde_json::Value::from(x),
        Err(_) => serde_json::Value::from(v.to_string()),
    }
}

pub(crate) fn int_from_json(v: &serde_json::Value) -> Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| format!("{n} is not an integer")),
        serde_json::Value::String(t) => t.trim().parse().map_err(|_| format!("{t:?} is not an integer")),
        other => Err(format!("{other} is not an integer")),
    }
}
