use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::projline::{ge2_classes, projective_line, ProjLine};
use crate::abelian::sparse::SparseVec;
use crate::abelian::{write_matrix_market, IntMatrix};
use crate::error::{Error, Result};
use crate::rings::{FiniteRing, DEFAULT_CUTOFF};

/// Highest degree a complex may be built to.
pub const MAX_DEGREE: usize = 5;

/// Default cap on the total number of basis tuples.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Which vertices the complex uses: the GE_2-orbit of `<e1>` (`Y`) or all
/// unimodular classes (`L`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Ge2,
    Gl2,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Ge2 => "ge2",
            Variant::Gl2 => "gl2",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ge2" => Ok(Variant::Ge2),
            "gl2" => Ok(Variant::Gl2),
            other => Err(Error::invalid(format!("unknown variant `{other}` (expected ge2 or gl2)"))),
        }
    }
}

/// Free chain complex on ordered tuples of pairwise generic classes.
///
/// `basis(n)` lists the `(n+1)`-tuples in lexicographic order of class
/// indices; `d_n = sum (-1)^i d_i` where `d_i` drops entry `i`.
#[derive(Clone, Debug)]
pub struct ChainComplexZ {
    pub(crate) line: ProjLine,
    variant: Variant,
    augmented: bool,
    vertices: Vec<usize>,
    vertex_bits: Vec<u64>,
    bits: u32,
    basis: Vec<Vec<u64>>,
}

/// Number of ordered tuples per degree, from a clique count.
pub fn estimate_sizes(line: &ProjLine, vertices: &[usize], max_degree: usize) -> Vec<u64> {
    let mut allowed = vec![0u64; line.len().div_ceil(64)];
    for &v in vertices {
        allowed[v / 64] |= 1 << (v % 64);
    }
    let mut cliques = vec![0u64; max_degree + 1];
    // count increasing cliques: each vertex extends by larger common neighbors
    fn rec(line: &ProjLine, cand: &[u64], size: usize, cliques: &mut [u64]) {
        cliques[size - 1] += 1;
        if size == cliques.len() {
            return;
        }
        for w in iter_bits(cand) {
            let mut next: Vec<u64> = cand
                .iter()
                .zip(line.neighbor_bits(w))
                .map(|(a, b)| a & b)
                .collect();
            clear_upto(&mut next, w);
            rec(line, &next, size + 1, cliques);
        }
    }
    for &v in vertices {
        let mut cand: Vec<u64> = allowed
            .iter()
            .zip(line.neighbor_bits(v))
            .map(|(a, b)| a & b)
            .collect();
        clear_upto(&mut cand, v);
        rec(line, &cand, 1, &mut cliques);
    }
    let mut fact = 1u64;
    cliques
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            fact = fact.saturating_mul(k as u64 + 1);
            c.saturating_mul(fact)
        })
        .collect()
}

fn clear_upto(bits: &mut [u64], w: usize) {
    for (i, word) in bits.iter_mut().enumerate() {
        let lo = i * 64;
        if lo + 64 <= w + 1 {
            *word = 0;
        } else if lo <= w {
            *word &= !((1u64 << (w - lo + 1)) - 1);
        }
    }
}

pub(crate) fn iter_bits(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + t)
        })
    })
}

/// Build `Y` (or `L`) up to degree `max_degree` with the default budget.
pub fn build_complex(
    r: &FiniteRing,
    max_degree: usize,
    variant: Variant,
    augmented: bool,
) -> Result<ChainComplexZ> {
    build_complex_with_budget(r, max_degree, variant, augmented, DEFAULT_BUDGET)
}

pub fn build_complex_with_budget(
    r: &FiniteRing,
    max_degree: usize,
    variant: Variant,
    augmented: bool,
    budget: u64,
) -> Result<ChainComplexZ> {
    if max_degree > MAX_DEGREE {
        return Err(Error::invalid(format!(
            "degree {max_degree} is above the cap {MAX_DEGREE}"
        )));
    }
    let line = projective_line(r);
    let vertices = match variant {
        Variant::Ge2 => ge2_classes(r, &line),
        Variant::Gl2 => (0..line.len()).collect(),
    };
    let sizes = estimate_sizes(&line, &vertices, max_degree);
    let total: u64 = sizes.iter().fold(0u64, |a, &b| a.saturating_add(b));
    if total > budget {
        return Err(Error::Budget(format!(
            "complex over {} up to degree {max_degree} has {total} basis tuples \
             (per degree {sizes:?}); budget is {budget}",
            r.spec_string()
        )));
    }
    let bits = (usize::BITS - line.len().max(2).saturating_sub(1).leading_zeros()).max(1);
    if bits as usize * (max_degree + 1) > 64 {
        return Err(Error::invalid(format!(
            "{} classes do not fit packed tuples of length {}",
            line.len(),
            max_degree + 1
        )));
    }
    let mut vertex_bits = vec![0u64; line.len().div_ceil(64)];
    for &v in &vertices {
        vertex_bits[v / 64] |= 1 << (v % 64);
    }
    let mut c = ChainComplexZ {
        line,
        variant,
        augmented,
        vertices,
        vertex_bits,
        bits,
        basis: Vec::new(),
    };
    c.basis.push(c.vertices.iter().map(|&v| v as u64).collect());
    for n in 1..=max_degree {
        let prev = &c.basis[n - 1];
        let next: Vec<u64> = prev
            .par_iter()
            .flat_map_iter(|&packed| {
                let t = c.unpack(packed, n - 1);
                let common = c.common_neighbors(&t);
                let shifted = packed << c.bits;
                iter_bits(&common)
                    .map(move |w| shifted | w as u64)
                    .collect::<Vec<_>>()
            })
            .collect();
        debug_assert_eq!(next.len() as u64, sizes[n]);
        c.basis.push(next);
    }
    log::debug!(
        "built {} complex over {}: sizes {:?}",
        variant,
        r.spec_string(),
        c.basis.iter().map(Vec::len).collect::<Vec<_>>()
    );
    Ok(c)
}

/// Default-cutoff ring from a spec and its complex, for quick experiments.
pub fn build_complex_for_spec(spec: &str, max_degree: usize, variant: Variant) -> Result<ChainComplexZ> {
    let r = FiniteRing::from_spec(&spec.parse()?, DEFAULT_CUTOFF)?;
    build_complex(&r, max_degree, variant, true)
}

impl ChainComplexZ {
    pub fn max_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn is_augmented(&self) -> bool {
        self.augmented
    }

    pub fn ring_spec(&self) -> &str {
        self.line.ring_spec()
    }

    pub fn line(&self) -> &ProjLine {
        &self.line
    }

    /// Class indices used as vertices, sorted.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn basis_len(&self, n: usize) -> usize {
        self.basis[n].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub(crate) fn unpack(&self, mut packed: u64, n: usize) -> Vec<usize> {
        let mask = (1u64 << self.bits) - 1;
        let mut t = vec![0; n + 1];
        for slot in t.iter_mut().rev() {
            *slot = (packed & mask) as usize;
            packed >>= self.bits;
        }
        t
    }

    pub(crate) fn pack(&self, t: &[usize]) -> u64 {
        t.iter().fold(0u64, |acc, &x| (acc << self.bits) | x as u64)
    }

    /// The `i`-th basis tuple of degree `n`.
    pub fn tuple(&self, n: usize, i: usize) -> Vec<usize> {
        self.unpack(self.basis[n][i], n)
    }

    pub fn index_of(&self, t: &[usize]) -> Option<usize> {
        let n = t.len().checked_sub(1)?;
        if n >= self.basis.len() || t.iter().any(|&x| x >= self.line.len()) {
            return None;
        }
        self.basis[n].binary_search(&self.pack(t)).ok()
    }

    pub(crate) fn common_neighbors(&self, t: &[usize]) -> Vec<u64> {
        let mut common = self.vertex_bits.clone();
        for &x in t {
            for (c, b) in common.iter_mut().zip(self.line.neighbor_bits(x)) {
                *c &= b;
            }
        }
        common
    }

    /// Column `i` of `d_n` as sparse `(row, coefficient)` data.
    pub fn boundary_column(&self, n: usize, i: usize) -> SparseVec<i64> {
        assert!(n >= 1 && n < self.basis.len());
        let t = self.tuple(n, i);
        let pairs = (0..=n)
            .map(|drop| {
                let face: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != drop)
                    .map(|(_, &x)| x)
                    .collect();
                let row = self.index_of(&face).expect("faces of basis tuples are basis tuples");
                (row as u32, if drop % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        SparseVec::from_pairs(pairs).expect("coefficients are +-1")
    }

    /// Row `i` of `d_{n+1}` (column `i` of the coboundary `d_{n+1}^T`).
    pub fn coboundary_column(&self, n: usize, i: usize) -> SparseVec<i64> {
        assert!(n + 1 < self.basis.len());
        let t = self.tuple(n, i);
        let common = self.common_neighbors(&t);
        let mut pairs = Vec::new();
        let mut s = vec![0; n + 2];
        for w in iter_bits(&common) {
            for pos in 0..=n + 1 {
                s[..pos].copy_from_slice(&t[..pos]);
                s[pos] = w;
                s[pos + 1..].copy_from_slice(&t[pos..]);
                let row = self.basis[n + 1]
                    .binary_search(&self.pack(&s))
                    .expect("cofaces of basis tuples are basis tuples");
                pairs.push((row as u32, if pos % 2 == 0 { 1 } else { -1 }));
            }
        }
        SparseVec::from_pairs(pairs).expect("coefficients are +-1")
    }

    /// `d_n` as an explicit matrix (rows: degree `n-1`, columns: degree `n`).
    pub fn boundary(&self, n: usize) -> Result<IntMatrix> {
        if n == 0 || n >= self.basis.len() {
            return Err(Error::invalid(format!(
                "boundary d_{n} is outside degrees 1..={}",
                self.max_degree()
            )));
        }
        let mut m = IntMatrix::zeros(self.basis[n - 1].len(), self.basis[n].len());
        for i in 0..self.basis[n].len() {
            let col = self.boundary_column(n, i);
            for (&r, &v) in col.idx.iter().zip(&col.val) {
                m.set(r as usize, i, BigInt::from(v));
            }
        }
        Ok(m)
    }

    /// The augmentation `Y_0 -> Z`, every vertex to 1.
    pub fn augmentation(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(1, self.basis[0].len());
        for i in 0..self.basis[0].len() {
            m.set(0, i, BigInt::from(1));
        }
        m
    }

    /// Check `d_{n-1} d_n = 0` for all `n` and `eps d_1 = 0`, column by column.
    pub fn verify(&self) -> Result<()> {
        for n in 1..self.basis.len() {
            let bad = (0..self.basis[n].len()).into_par_iter().find_any(|&i| {
                let col = self.boundary_column(n, i);
                if n == 1 {
                    return col.val.iter().sum::<i64>() != 0;
                }
                let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
                for (&r, &v) in col.idx.iter().zip(&col.val) {
                    let inner = self.boundary_column(n - 1, r as usize);
                    for (&r2, &v2) in inner.idx.iter().zip(&inner.val) {
                        *acc.entry(r2).or_default() += v * v2;
                    }
                }
                acc.values().any(|&x| x != 0)
            });
            if let Some(i) = bad {
                return Err(Error::internal(format!(
                    "boundary of degree-{n} tuple {:?} does not vanish under the next boundary",
                    self.tuple(n, i)
                )));
            }
        }
        for n in 0..self.basis.len() {
            for &p in &self.basis[n] {
                let t = self.unpack(p, n);
                for a in 0..t.len() {
                    for b in a + 1..t.len() {
                        if !self.line.generic(t[a], t[b]) {
                            return Err(Error::internal(format!("tuple {t:?} is not pairwise generic")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Write `meta.txt`, `basis_<n>.txt` and `boundary_<n>.mtx` into `dir`.
    pub fn export(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut meta = BufWriter::new(fs::File::create(dir.join("meta.txt"))?);
        writeln!(meta, "ring {}", self.ring_spec())?;
        writeln!(meta, "variant {}", self.variant)?;
        writeln!(meta, "augmented {}", self.augmented)?;
        writeln!(meta, "max_degree {}", self.max_degree())?;
        writeln!(meta, "classes {}", self.line.len())?;
        for c in 0..self.line.len() {
            let (u1, u2) = self.line.representative(c);
            writeln!(meta, "class {c} {u1} {u2}")?;
        }
        meta.flush()?;
        for n in 0..self.basis.len() {
            let mut f = BufWriter::new(fs::File::create(dir.join(format!("basis_{n}.txt")))?);
            for i in 0..self.basis[n].len() {
                let t: Vec<String> = self.tuple(n, i).iter().map(usize::to_string).collect();
                writeln!(f, "{}", t.join(" "))?;
            }
            f.flush()?;
            if n >= 1 {
                let f = BufWriter::new(fs::File::create(dir.join(format!("boundary_{n}.mtx")))?);
                write_matrix_market(&self.boundary(n)?, f)?;
            }
        }
        Ok(())
    }

    /// Read a complex written by [`export`](Self::export), rebuilding the
    /// projective line from the recorded ring spec and checking every tuple.
    pub fn import(dir: &Path, cutoff: usize) -> Result<ChainComplexZ> {
        let meta = fs::read_to_string(dir.join("meta.txt"))?;
        let field = |key: &str| -> Result<&str> {
            meta.lines()
                .find_map(|l| l.strip_prefix(key).map(str::trim))
                .ok_or_else(|| Error::Format(format!("meta.txt lacks `{key}`")))
        };
        let ring = FiniteRing::from_spec(&field("ring ")?.parse()?, cutoff)?;
        let variant: Variant = field("variant ")?.parse()?;
        let augmented = field("augmented ")? == "true";
        let max_degree: usize = field("max_degree ")?
            .parse()
            .map_err(|_| Error::Format("bad max_degree".into()))?;
        let built = build_complex_with_budget(&ring, max_degree, variant, augmented, u64::MAX)?;
        for n in 0..=max_degree {
            let f = BufReader::new(fs::File::open(dir.join(format!("basis_{n}.txt")))?);
            let mut count = 0;
            for (i, line) in f.lines().enumerate() {
                let t: Vec<usize> = line?
                    .split_whitespace()
                    .map(|x| x.parse().map_err(|_| Error::Format(format!("bad tuple entry `{x}`"))))
                    .collect::<Result<_>>()?;
                if built.index_of(&t) != Some(i) {
                    return Err(Error::Format(format!("basis_{n}.txt line {} is {t:?}, not basis tuple {i}", i + 1)));
                }
                count += 1;
            }
            if count != built.basis_len(n) {
                return Err(Error::Format(format!("basis_{n}.txt has {count} tuples, expected {}", built.basis_len(n))));
            }
        }
        Ok(built)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(s: &str, n: usize) -> ChainComplexZ {
        build_complex(&FiniteRing::parse(s).unwrap(), n, Variant::Ge2, true).unwrap()
    }

    #[test]
    fn field_sizes_are_falling_factorials() {
        let c = complex("gf:7^1", 3);
        assert_eq!(c.sizes(), vec![8, 56, 336, 1680]);
        let c = complex("zmod:25", 2);
        assert_eq!(c.sizes(), vec![30, 750, 15000]);
    }

    #[test]
    fn d1_of_an_edge() {
        let r = FiniteRing::parse("gf:5^1").unwrap();
        let c = build_complex(&r, 1, Variant::Ge2, true).unwrap();
        let inf = c.line().infinity(&r);
        let zero = c.line().zero(&r);
        let e = c.index_of(&[inf, zero]).unwrap();
        let col = c.boundary_column(1, e);
        let mut got: Vec<(usize, i64)> = col.idx.iter().map(|&i| i as usize).zip(col.val.clone()).collect();
        got.sort();
        let mut want = vec![(c.index_of(&[zero]).unwrap(), 1), (c.index_of(&[inf]).unwrap(), -1)];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn boundaries_square_to_zero() {
        complex("gf:5^1", 3).verify().unwrap();
        complex("zmod:6", 2).verify().unwrap();
        complex("prod:zmod:2+zmod:2", 3).verify().unwrap();
        let c = complex("gf:5^1", 2);
        assert_eq!(c.basis_len(2), 120);
        let d1 = c.boundary(1).unwrap();
        let d2 = c.boundary(2).unwrap();
        assert!(d1.mul(&d2).unwrap().is_zero());
        assert!(c.augmentation().mul(&d1).unwrap().is_zero());
    }

    #[test]
    fn coboundary_is_transpose_of_boundary() {
        let c = complex("zmod:4", 2);
        let d2 = c.boundary(2).unwrap();
        for i in 0..c.basis_len(1) {
            let col = c.coboundary_column(1, i);
            let dense: Vec<(usize, i64)> = col.idx.iter().map(|&j| j as usize).zip(col.val.clone()).collect();
            let from_matrix: Vec<(usize, i64)> = d2
                .row(i)
                .map(|(j, v)| (j, i64::try_from(v).unwrap()))
                .collect();
            assert_eq!(dense, from_matrix);
        }
    }

    #[test]
    fn budget_is_enforced_before_building() {
        let r = FiniteRing::parse("zmod:25").unwrap();
        match build_complex_with_budget(&r, 4, Variant::Ge2, true, 1000) {
            Err(Error::Budget(msg)) => assert!(msg.contains("2250000"), "{msg}"),
            other => panic!("expected a budget error, got {other:?}"),
        }
        assert!(build_complex(&r, 6, Variant::Ge2, true).is_err());
    }

    #[test]
    fn export_round_trip() {
        let c = complex("zmod:4", 2);
        let dir = tempfile::tempdir().unwrap();
        c.export(dir.path()).unwrap();
        let back = ChainComplexZ::import(dir.path(), 64).unwrap();
        assert_eq!(back.sizes(), c.sizes());
    }
}
