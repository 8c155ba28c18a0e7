//! Dense Smith normal form with unimodular transforms.
//!
//! Pivot rule: smallest nonzero absolute value in the active block, ties
//! broken by lowest column and then lowest row. The rule is deterministic, so
//! transforms are reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal with `d1 | d2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `D`, including zeros, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .collect()
    }

    /// Check every postcondition against the input matrix.
    pub fn verify(&self, m: &IntMatrix) -> Result<()> {
        let prod = self.u.mul(m)?.mul(&self.v)?;
        if prod != self.d {
            return Err(Error::internal("U*M*V != D"));
        }
        for (r, c, _) in self.d.iter() {
            if r != c {
                return Err(Error::internal("D is not diagonal"));
            }
        }
        let diag = self.diagonal();
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            if !ok || w[0].is_negative() {
                return Err(Error::internal(format!(
                    "divisibility chain broken at {} | {}",
                    w[0], w[1]
                )));
            }
        }
        for (name, t) in [("U", &self.u), ("V", &self.v)] {
            if !t.determinant()?.abs().is_one() {
                return Err(Error::internal(format!("{name} is not unimodular")));
            }
        }
        Ok(())
    }
}

/// Which transforms to accumulate during elimination.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub v: bool,
    pub v_inv: bool,
}

pub(crate) struct DenseSnf {
    pub diag: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
}

impl DenseSnf {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

fn eye(n: usize, on: bool) -> Vec<Vec<BigInt>> {
    if !on {
        return Vec::new();
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

struct Work {
    a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

fn row_axpy(m: &mut [Vec<BigInt>], i: usize, j: usize, c: &BigInt) {
    if i == j || c.is_zero() {
        return;
    }
    let (src, dst) = if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&hi[0], &mut lo[i])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&lo[j], &mut hi[0])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *d += c * s;
        }
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], i: usize, j: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[j].is_zero() {
            let add = c * &row[j];
            row[i] += add;
        }
    }
}

impl Work {
    // row_i += c * row_j
    fn row_add(&mut self, i: usize, j: usize, c: &BigInt) {
        row_axpy(&mut self.a, i, j, c);
        if !self.u.is_empty() {
            row_axpy(&mut self.u, i, j, c);
        }
    }

    // col_i += c * col_j
    fn col_add(&mut self, i: usize, j: usize, c: &BigInt) {
        col_axpy(&mut self.a, i, j, c);
        if !self.v.is_empty() {
            col_axpy(&mut self.v, i, j, c);
        }
        if !self.v_inv.is_empty() {
            row_axpy(&mut self.v_inv, j, i, &-c);
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if !self.u.is_empty() {
            self.u.swap(i, j);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if !self.v.is_empty() {
            for row in self.v.iter_mut() {
                row.swap(i, j);
            }
        }
        if !self.v_inv.is_empty() {
            self.v_inv.swap(i, j);
        }
    }

    fn row_negate(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if !self.u.is_empty() {
            for x in self.u[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    fn pivot_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for j in t..self.cols {
            for i in t..self.rows {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.abs() < self.a[bi][bj].abs(),
                };
                if better {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.rows {
            if self.a[i][t].is_zero() {
                continue;
            }
            let q = self.a[i][t].div_floor(&self.a[t][t]);
            self.row_add(i, t, &-q);
            if !self.a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.cols {
            if self.a[t][j].is_zero() {
                continue;
            }
            let q = self.a[t][j].div_floor(&self.a[t][t]);
            self.col_add(j, t, &-q);
            if !self.a[t][j].is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn smallest_on_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut key = self.a[t][t].abs();
        for i in t + 1..self.rows {
            let x = &self.a[i][t];
            if !x.is_zero() && x.abs() < key {
                key = x.abs();
                best = (i, t);
            }
        }
        for j in t + 1..self.cols {
            let x = &self.a[t][j];
            if !x.is_zero() && x.abs() < key {
                key = x.abs();
                best = (t, j);
            }
        }
        best
    }

    fn run(&mut self) -> Vec<BigInt> {
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = self.pivot_in_block(t) else {
                break;
            };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                if !self.clear_cross(t) {
                    let (i, j) = self.smallest_on_cross(t);
                    self.row_swap(t, i);
                    self.col_swap(t, j);
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !(&self.a[i][j] % &p).is_zero())
                });
                match bad {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.row_negate(t);
            }
            t += 1;
        }
        (0..n).map(|i| self.a[i][i].clone()).collect()
    }
}

pub(crate) fn dense_snf(a: Vec<Vec<BigInt>>, rows: usize, cols: usize, track: Track) -> DenseSnf {
    let mut w = Work {
        a,
        rows,
        cols,
        u: eye(rows, track.u),
        v: eye(cols, track.v),
        v_inv: eye(cols, track.v_inv),
    };
    let diag = w.run();
    DenseSnf {
        diag,
        u: w.u,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// Smith normal form of an integer matrix, with both transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let track = Track {
        u: true,
        v: true,
        ..Track::default()
    };
    let s = dense_snf(m.to_dense(), rows, cols, track);
    let mut d = IntMatrix::zeros(rows, cols);
    for (i, x) in s.diag.iter().enumerate() {
        d.set(i, i, x.clone());
    }
    let form = SmithForm {
        d,
        u: IntMatrix::from_dense(rows, rows, &s.u),
        v: IntMatrix::from_dense(cols, cols, &s.v),
    };
    #[cfg(debug_assertions)]
    if rows.max(cols) <= 60 {
        if let Err(e) = form.verify(m) {
            panic!("smith normal form postcondition: {e}");
        }
    }
    form
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(rows: &[Vec<i64>]) -> Vec<i64> {
        let m = IntMatrix::from_rows(rows).unwrap();
        let f = smith_normal_form(&m);
        f.verify(&m).unwrap();
        f.diagonal()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn identity_is_fixed() {
        let id: Vec<Vec<i64>> = (0..3)
            .map(|i| (0..3).map(|j| i64::from(i == j)).collect())
            .collect();
        assert_eq!(diag_of(&id), vec![1, 1, 1]);
    }

    #[test]
    fn two_by_two_example() {
        assert_eq!(diag_of(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(diag_of(&[vec![0, 0, 0], vec![0, 0, 0]]), vec![0, 0]);
    }

    #[test]
    fn rectangular_with_torsion() {
        // Z^3 / <(2,0,0),(0,3,0)> = Z/6 + Z after SNF: diag(1, 6)
        assert_eq!(diag_of(&[vec![2, 0, 0], vec![0, 3, 0]]), vec![1, 6]);
    }

    #[test]
    fn empty_shapes() {
        let m = IntMatrix::zeros(0, 3);
        let f = smith_normal_form(&m);
        assert!(f.diagonal().is_empty());
        assert_eq!(f.v.rows(), 3);
    }
}
