use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Sparse integer matrix with arbitrary-precision entries.
///
/// Zero entries are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::invalid(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        Ok(m)
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in dense.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &BigInt) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    /// Nonzero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &BigInt)> {
        self.entries
            .range((r, 0)..(r + 1, 0))
            .map(|(&(_, c), v)| (c, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in other.iter() {
            by_row[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (r, k, a) in self.iter() {
            for &(c, b) in &by_row[k] {
                *acc.entry((r, c)).or_default() += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(IntMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        })
    }

    /// Matrix times column vector.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![BigInt::zero(); self.rows];
        for (r, c, v) in self.iter() {
            y[r] += v * &x[c];
        }
        y
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::invalid("vstack with mismatched column counts"));
        }
        let mut m = self.clone();
        m.rows += other.rows;
        for (r, c, v) in other.iter() {
            m.entries.insert((r + self.rows, c), v.clone());
        }
        Ok(m)
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * if n == 0 { BigInt::one() } else { a[n - 1][n - 1].clone() })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        if self.rows * self.cols <= 400 {
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        } else {
            writeln!(f, "  {} nonzero entries", self.nnz())?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_entries_are_not_stored() {
        let mut m = IntMatrix::zeros(2, 2);
        m.set(0, 1, BigInt::from(3));
        m.set(0, 1, BigInt::zero());
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(-8));
        let m = IntMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(-2));
    }

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]).unwrap();
        let b = a.transpose();
        let p = a.mul(&b).unwrap();
        assert_eq!(p, IntMatrix::from_rows(&[vec![5, 2], vec![2, 1]]).unwrap());
    }
}
