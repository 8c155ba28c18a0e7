//! Sparse elimination for elementary divisors without transforms.
//!
//! Boundary matrices of the complexes in this crate are large, very sparse and
//! almost always reducible with unit pivots. Two stages:
//!
//! 1. a column echelon pass (pivot = largest row index of each column) using
//!    only unimodular column operations, with extended-gcd merges when two
//!    columns share a pivot row and neither coefficient divides the other;
//! 2. if any echelon pivot is not a unit, a Markowitz-style unit-pivot
//!    elimination followed by dense Smith normal form on what remains.
//!
//! Both stages run on checked `i64` first and are repeated on `BigInt` after
//! an overflow.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::int::{Coeff, Overflow};
use super::snf::{dense_snf, Track};

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SparseVec<T> {
    pub idx: Vec<u32>,
    pub val: Vec<T>,
}

impl<T: Coeff> SparseVec<T> {
    pub fn new() -> Self {
        SparseVec {
            idx: Vec::new(),
            val: Vec::new(),
        }
    }

    /// Build from unsorted `(index, value)` pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(u32, T)>) -> Result<Self, Overflow> {
        pairs.sort_by_key(|p| p.0);
        let mut out: SparseVec<T> = SparseVec::new();
        for (i, v) in pairs {
            if out.idx.last() == Some(&i) {
                let last: &mut T = out.val.last_mut().unwrap();
                *last = last.add_mul(&v, &T::from_i64(1))?;
            } else {
                out.idx.push(i);
                out.val.push(v);
            }
        }
        out.prune();
        Ok(out)
    }

    fn prune(&mut self) {
        if self.val.iter().all(|v| !v.is_nil()) {
            return;
        }
        let mut k = 0;
        for j in 0..self.idx.len() {
            if !self.val[j].is_nil() {
                self.idx[k] = self.idx[j];
                self.val.swap(k, j);
                k += 1;
            }
        }
        self.idx.truncate(k);
        self.val.truncate(k);
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn low(&self) -> Option<(u32, &T)> {
        self.idx.last().map(|&i| (i, self.val.last().unwrap()))
    }

    pub fn get(&self, i: u32) -> Option<&T> {
        self.idx.binary_search(&i).ok().map(|k| &self.val[k])
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: &T, other: &Self, b: &T) -> Result<Self, Overflow> {
        let zero = T::nil();
        let mut out = SparseVec {
            idx: Vec::with_capacity(self.len() + other.len()),
            val: Vec::with_capacity(self.len() + other.len()),
        };
        let (mut p, mut q) = (0, 0);
        while p < self.len() || q < other.len() {
            let ip = self.idx.get(p).copied().unwrap_or(u32::MAX);
            let iq = other.idx.get(q).copied().unwrap_or(u32::MAX);
            let (i, v) = if ip < iq {
                p += 1;
                (ip, zero.add_mul(a, &self.val[p - 1])?)
            } else if iq < ip {
                q += 1;
                (iq, zero.add_mul(b, &other.val[q - 1])?)
            } else {
                p += 1;
                q += 1;
                let s = zero.add_mul(a, &self.val[p - 1])?;
                (ip, s.add_mul(b, &other.val[q - 1])?)
            };
            if !v.is_nil() {
                out.idx.push(i);
                out.val.push(v);
            }
        }
        Ok(out)
    }

    pub fn to_big(&self) -> SparseVec<BigInt> {
        SparseVec {
            idx: self.idx.clone(),
            val: self.val.iter().map(Coeff::to_big).collect(),
        }
    }
}

/// Result of a rank / elementary-divisor computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisors {
    pub rank: usize,
    /// Elementary divisors greater than one, ascending.
    pub nontrivial: Vec<BigInt>,
}

/// Incremental column echelon over the integers.
pub struct Echelon<T> {
    pivot_of_row: Vec<u32>,
    cols: Vec<SparseVec<T>>,
}

const NONE: u32 = u32::MAX;

impl<T: Coeff> Echelon<T> {
    pub fn new(nrows: usize) -> Self {
        Echelon {
            pivot_of_row: vec![NONE; nrows],
            cols: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Pivot rows whose stored coefficient is a unit.
    pub fn unit_pivot_rows(&self) -> impl Iterator<Item = u32> + '_ {
        self.cols
            .iter()
            .filter(|c| c.low().unwrap().1.is_unit())
            .map(|c| c.low().unwrap().0)
    }

    pub fn all_units(&self) -> bool {
        self.cols.iter().all(|c| c.low().unwrap().1.is_unit())
    }

    /// Reduce `v` against the stored columns and store it if it survives.
    /// Returns the pivot row of the new column, or `None` if `v` reduced to zero.
    pub fn push(&mut self, mut v: SparseVec<T>) -> Result<Option<u32>, Overflow> {
        loop {
            let Some((row, a)) = v.low() else {
                return Ok(None);
            };
            let a = a.clone();
            let slot = self.pivot_of_row[row as usize];
            if slot == NONE {
                self.pivot_of_row[row as usize] = self.cols.len() as u32;
                self.cols.push(v);
                return Ok(Some(row));
            }
            let stored = &self.cols[slot as usize];
            let b = stored.low().unwrap().1.clone();
            if b.divides(&a) {
                let q = a.quot(&b).neg()?;
                v = v.combine(&T::from_i64(1), stored, &q)?;
            } else {
                // [stored, v] <- [s*stored + t*v, (a/g)*stored - (b/g)*v]
                let (g, s, t) = T::xgcd(&b, &a)?;
                let new_stored = stored.combine(&s, &v, &t)?;
                let a_g = a.quot(&g);
                let b_g = b.quot(&g).neg()?;
                let new_v = stored.combine(&a_g, &v, &b_g)?;
                self.cols[slot as usize] = new_stored;
                v = new_v;
            }
        }
    }

    /// Elementary divisors of the span of all pushed columns.
    pub fn divisors(&self) -> Result<Divisors, Overflow> {
        let rank = self.rank();
        if self.all_units() {
            return Ok(Divisors {
                rank,
                nontrivial: Vec::new(),
            });
        }
        let nrows = self.pivot_of_row.len();
        let nontrivial = eliminate(self.cols.clone(), nrows)?;
        Ok(Divisors { rank, nontrivial })
    }
}

/// Stage 2: Markowitz unit-pivot elimination, then dense SNF of the core.
/// Returns elementary divisors greater than one.
fn eliminate<T: Coeff>(mut cols: Vec<SparseVec<T>>, nrows: usize) -> Result<Vec<BigInt>, Overflow> {
    let mut alive: Vec<bool> = cols.iter().map(|c| !c.is_empty()).collect();
    let mut row_cols: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for &i in &c.idx {
            row_cols[i as usize].insert(j as u32);
        }
    }
    // Candidate queue keyed by (markowitz cost, col, row); stale entries are
    // re-validated when popped.
    let mut queue: BTreeSet<(usize, u32, u32)> = BTreeSet::new();
    let cost = |c: &SparseVec<T>, i: u32, rc: &[BTreeSet<u32>]| {
        (c.len() - 1) * (rc[i as usize].len() - 1)
    };
    for (j, c) in cols.iter().enumerate() {
        for (k, &i) in c.idx.iter().enumerate() {
            if c.val[k].is_unit() {
                queue.insert((cost(c, i, &row_cols), j as u32, i));
            }
        }
    }
    while let Some(entry) = queue.pop_first() {
        let (old_cost, j, r) = entry;
        let ju = j as usize;
        if !alive[ju] {
            continue;
        }
        let Some(u) = cols[ju].get(r).cloned() else {
            continue;
        };
        if !u.is_unit() {
            continue;
        }
        let now = cost(&cols[ju], r, &row_cols);
        if now != old_cost {
            queue.insert((now, j, r));
            continue;
        }
        // Clear row r from every other column using column j.
        let pivot_col = cols[ju].clone();
        let others: Vec<u32> = row_cols[r as usize]
            .iter()
            .copied()
            .filter(|&k| k != j)
            .collect();
        for k in others {
            let ku = k as usize;
            let e = cols[ku].get(r).cloned().unwrap();
            // u is +-1 so e / u == e * u
            let f = e.mul(&u)?.neg()?;
            let before: Vec<u32> = cols[ku].idx.clone();
            let updated = cols[ku].combine(&T::from_i64(1), &pivot_col, &f)?;
            for &i in &before {
                row_cols[i as usize].remove(&k);
            }
            for (p, &i) in updated.idx.iter().enumerate() {
                row_cols[i as usize].insert(k);
                if updated.val[p].is_unit() {
                    queue.insert((0, k, i));
                }
            }
            cols[ku] = updated;
            if cols[ku].is_empty() {
                alive[ku] = false;
            }
        }
        // Column j now meets row r alone; row operations remove the rest of
        // column j without touching any other column.
        for &i in &cols[ju].idx {
            row_cols[i as usize].remove(&j);
        }
        alive[ju] = false;
        cols[ju] = SparseVec::new();
    }
    // Dense core.
    let core_cols: Vec<usize> = (0..cols.len()).filter(|&j| alive[j]).collect();
    if core_cols.is_empty() {
        return Ok(Vec::new());
    }
    let mut row_map: BTreeMap<u32, usize> = BTreeMap::new();
    for &j in &core_cols {
        for &i in &cols[j].idx {
            let next = row_map.len();
            row_map.entry(i).or_insert(next);
        }
    }
    let nr = row_map.len();
    let nc = core_cols.len();
    let mut dense = vec![vec![BigInt::zero(); nc]; nr];
    for (cj, &j) in core_cols.iter().enumerate() {
        for (k, &i) in cols[j].idx.iter().enumerate() {
            dense[row_map[&i]][cj] = cols[j].val[k].to_big();
        }
    }
    let snf = dense_snf(dense, nr, nc, Track::default());
    let mut out: Vec<BigInt> = snf
        .diag
        .into_iter()
        .filter(|d| !d.is_zero() && !d.abs().is_one())
        .collect();
    out.sort();
    Ok(out)
}

/// Elementary divisors of the matrix whose columns are `cols`.
///
/// Columns are reduced in the given order. Runs in `i64` and falls back to
/// arbitrary precision on overflow.
pub fn column_divisors(cols: &[SparseVec<i64>], nrows: usize) -> Divisors {
    match try_divisors(cols.iter().cloned(), nrows) {
        Ok(d) => d,
        Err(Overflow) => {
            log::debug!("i64 overflow in sparse elimination; retrying with bigints");
            try_divisors(cols.iter().map(SparseVec::to_big), nrows)
                .expect("bigint arithmetic cannot overflow")
        }
    }
}

fn try_divisors<T: Coeff>(cols: impl Iterator<Item = SparseVec<T>>, nrows: usize) -> Result<Divisors, Overflow> {
    let mut ech = Echelon::<T>::new(nrows);
    for c in cols {
        ech.push(c)?;
    }
    ech.divisors()
}

/// Same as [`column_divisors`] but skips the echelon pass and eliminates the
/// matrix directly. Suited to moderately sized matrices with torsion.
pub fn direct_divisors(cols: &[SparseVec<i64>], nrows: usize) -> Divisors {
    let run = |big: bool| -> Result<Divisors, Overflow> {
        if big {
            let cs: Vec<SparseVec<BigInt>> = cols.iter().map(SparseVec::to_big).collect();
            eliminate_with_rank(cs, nrows)
        } else {
            eliminate_with_rank(cols.to_vec(), nrows)
        }
    };
    run(false).unwrap_or_else(|_| run(true).expect("bigint arithmetic cannot overflow"))
}

fn eliminate_with_rank<T: Coeff>(cols: Vec<SparseVec<T>>, nrows: usize) -> Result<Divisors, Overflow> {
    let mut ech = Echelon::<T>::new(nrows);
    for c in cols.iter().cloned() {
        ech.push(c)?;
    }
    let rank = ech.rank();
    if ech.all_units() {
        return Ok(Divisors {
            rank,
            nontrivial: Vec::new(),
        });
    }
    let nontrivial = eliminate(cols, nrows)?;
    Ok(Divisors { rank, nontrivial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::matrix::IntMatrix;
    use crate::abelian::snf::smith_normal_form;

    fn cols_of(rows: &[Vec<i64>]) -> (Vec<SparseVec<i64>>, usize) {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|j| {
                SparseVec::from_pairs(
                    (0..nrows)
                        .filter(|&i| rows[i][j] != 0)
                        .map(|i| (i as u32, rows[i][j]))
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        (cols, nrows)
    }

    fn dense_reference(rows: &[Vec<i64>]) -> Divisors {
        let m = IntMatrix::from_rows(rows).unwrap();
        let diag = smith_normal_form(&m).diagonal();
        Divisors {
            rank: diag.iter().filter(|d| !d.is_zero()).count(),
            nontrivial: diag
                .into_iter()
                .filter(|d| !d.is_zero() && !d.is_one())
                .collect(),
        }
    }

    #[test]
    fn echelon_matches_dense_on_small_cases() {
        let cases = vec![
            vec![vec![2, 4], vec![6, 8]],
            vec![vec![2, 0, 0], vec![0, 3, 0]],
            vec![vec![4, 6], vec![6, 9]],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![1, -1, 0], vec![-1, 0, 1], vec![0, 1, -1]],
        ];
        for rows in cases {
            let (cols, nrows) = cols_of(&rows);
            assert_eq!(column_divisors(&cols, nrows), dense_reference(&rows), "{rows:?}");
            assert_eq!(direct_divisors(&cols, nrows), dense_reference(&rows), "{rows:?}");
        }
    }

    #[test]
    fn overflow_falls_back_to_bigints() {
        let big = i64::MAX / 3;
        let rows = vec![vec![big, big - 1], vec![big - 2, big - 7]];
        let (cols, nrows) = cols_of(&rows);
        assert_eq!(column_divisors(&cols, nrows), dense_reference(&rows));
    }

    #[test]
    fn combine_cancels() {
        let a = SparseVec::from_pairs(vec![(0, 1i64), (3, 2)]).unwrap();
        let b = SparseVec::from_pairs(vec![(3, 1i64)]).unwrap();
        let c = a.combine(&1, &b, &-2).unwrap();
        assert_eq!(c.idx, vec![0]);
    }

    proptest::proptest! {
        #[test]
        fn random_matrices_agree_with_dense(
            rows in proptest::collection::vec(proptest::collection::vec(-6i64..6, 5), 1..7)
        ) {
            let (cols, nrows) = cols_of(&rows);
            let reference = dense_reference(&rows);
            proptest::prop_assert_eq!(column_divisors(&cols, nrows), reference.clone());
            proptest::prop_assert_eq!(direct_divisors(&cols, nrows), reference);
        }
    }
}
