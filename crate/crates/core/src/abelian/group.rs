use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::int::reduce_mod;
use super::matrix::IntMatrix;
use super::snf::{dense_snf, Track};
use super::sparse::{column_divisors, SparseVec};
use crate::error::{Error, Result};

/// A finitely generated abelian group in invariant-factor form
/// `Z/d1 + Z/d2 + ... ` with `d1 | d2 | ...`; a factor `0` stands for `Z`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct FinAbGroup {
    factors: Vec<BigInt>,
}

impl FinAbGroup {
    /// Validates the divisibility chain; factors equal to one are rejected.
    pub fn new(factors: Vec<BigInt>) -> Result<Self> {
        for d in &factors {
            if d.is_negative() || d.is_one() {
                return Err(Error::invalid(format!("invalid invariant factor {d}")));
            }
        }
        for w in factors.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            if !ok {
                return Err(Error::invalid(format!(
                    "invariant factors {} and {} do not form a divisibility chain",
                    w[0], w[1]
                )));
            }
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup::default()
    }

    pub fn integers() -> Self {
        FinAbGroup {
            factors: vec![BigInt::zero()],
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            factors: vec![BigInt::zero(); rank],
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_orders(&[BigInt::from(n)])
    }

    /// Normalize an arbitrary direct sum of cyclic groups `Z/n_i` (0 = `Z`).
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let mut free = 0;
        // Prime-power bucketing would also do; the SNF of a diagonal matrix is
        // simpler to trust.
        let finite: Vec<BigInt> = orders
            .iter()
            .filter(|n| {
                if n.is_zero() {
                    free += 1;
                    false
                } else {
                    true
                }
            })
            .map(|n| n.abs())
            .filter(|n| !n.is_one())
            .collect();
        let k = finite.len();
        let mut dense = vec![vec![BigInt::zero(); k]; k];
        for (i, n) in finite.iter().enumerate() {
            dense[i][i] = n.clone();
        }
        let snf = dense_snf(dense, k, k, Track::default());
        let mut factors: Vec<BigInt> = snf.diag.into_iter().filter(|d| !d.is_one()).collect();
        factors.extend(std::iter::repeat(BigInt::zero()).take(free));
        FinAbGroup { factors }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Number of cyclic summands (generators of the canonical system).
    pub fn ngens(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|d| !d.is_zero())
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// Group order, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.is_finite() {
            Some(self.factors.iter().product())
        } else {
            None
        }
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().and_then(|o| u64::try_from(o).ok())
    }

    /// Torsion subgroup.
    pub fn torsion(&self) -> FinAbGroup {
        FinAbGroup {
            factors: self.factors.iter().filter(|d| !d.is_zero()).cloned().collect(),
        }
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut all = self.factors.clone();
        all.extend(other.factors.iter().cloned());
        Self::from_orders(&all)
    }

    /// Canonical coordinates: finite coordinates reduced into `[0, d)`.
    pub fn normalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.factors.len());
        coords
            .iter()
            .zip(&self.factors)
            .map(|(c, d)| reduce_mod(c, d))
            .collect()
    }

    pub fn is_zero_element(&self, coords: &[BigInt]) -> bool {
        self.normalize(coords).iter().all(Zero::is_zero)
    }

    /// All elements of a finite group in canonical coordinates (small groups only).
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>> {
        let order = self
            .order_u64()
            .filter(|&o| o <= 1 << 20)
            .ok_or_else(|| Error::invalid(format!("cannot enumerate {self}")))?;
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); self.factors.len()];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return Ok(out);
                }
                cur[i] += 1;
                if cur[i] == self.factors[i] {
                    cur[i] = BigInt::zero();
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.factors.iter().map(|d| d.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for FinAbGroup {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        let factors = v
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::Format(format!("bad invariant factor `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        FinAbGroup::new(factors)
    }
}

impl From<FinAbGroup> for Vec<String> {
    fn from(g: FinAbGroup) -> Self {
        g.to_strings()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|d| {
                if d.is_zero() {
                    "Z".to_string()
                } else {
                    format!("Z/{d}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup({self})")
    }
}

/// A group presented on raw generators, together with the change of basis to
/// its invariant-factor form.
#[derive(Clone, Debug)]
pub struct Presented {
    pub group: FinAbGroup,
    /// Row `s`: coordinates of raw generator `s` in the invariant basis.
    coords: Vec<Vec<BigInt>>,
    /// Row `i`: invariant generator `i` as a combination of raw generators.
    gens: Vec<Vec<BigInt>>,
}

impl Presented {
    pub fn num_raw(&self) -> usize {
        self.coords.len()
    }

    /// Canonical coordinates of a raw combination.
    pub fn reduce(&self, raw: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(raw.len(), self.coords.len());
        let k = self.group.ngens();
        let mut out = vec![BigInt::zero(); k];
        for (s, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&self.coords[s]) {
                *o += c * x;
            }
        }
        self.group.normalize(&out)
    }

    pub fn reduce_sparse(&self, raw: &[(usize, BigInt)]) -> Vec<BigInt> {
        let k = self.group.ngens();
        let mut out = vec![BigInt::zero(); k];
        for (s, c) in raw {
            for (o, x) in out.iter_mut().zip(&self.coords[*s]) {
                *o += c * x;
            }
        }
        self.group.normalize(&out)
    }

    /// Invariant generator `i` as a raw combination.
    pub fn generator(&self, i: usize) -> &[BigInt] {
        &self.gens[i]
    }
}

/// Present `Z^num_gens / rowspace(relations)`, keeping the basis change.
pub fn present(num_gens: usize, relations: &IntMatrix) -> Result<Presented> {
    if relations.cols() != num_gens {
        return Err(Error::invalid(format!(
            "relation matrix has {} columns but {num_gens} generators were declared",
            relations.cols()
        )));
    }
    let rows = relations.rows();
    let track = Track {
        v: true,
        v_inv: true,
        ..Track::default()
    };
    let snf = dense_snf(relations.to_dense(), rows, num_gens, track);
    let mut diag = snf.diag.clone();
    diag.resize(num_gens, BigInt::zero());
    // Keep coordinates with d != 1; x -> x V maps raw coordinates to SNF ones.
    let keep: Vec<usize> = (0..num_gens).filter(|&i| !diag[i].is_one()).collect();
    // Invariant-factor order puts torsion before free summands.
    let mut ordered: Vec<usize> = keep.iter().copied().filter(|&i| !diag[i].is_zero()).collect();
    ordered.extend(keep.iter().copied().filter(|&i| diag[i].is_zero()));
    let factors: Vec<BigInt> = ordered.iter().map(|&i| diag[i].clone()).collect();
    let group = FinAbGroup::new(factors)?;
    let coords = (0..num_gens)
        .map(|s| {
            let row: Vec<BigInt> = ordered.iter().map(|&i| snf.v[s][i].clone()).collect();
            group.normalize(&row)
        })
        .collect();
    let gens = ordered.iter().map(|&i| snf.v_inv[i].clone()).collect();
    Ok(Presented { group, coords, gens })
}

/// `Z^num_gens / rowspace(relations)` in invariant-factor form.
pub fn fp_group(num_gens: usize, relations: &IntMatrix) -> Result<FinAbGroup> {
    if relations.cols() != num_gens {
        return Err(Error::invalid(format!(
            "relation matrix has {} columns but {num_gens} generators were declared",
            relations.cols()
        )));
    }
    // Transposed: each relation is a column over the generators.
    let mut cols: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); relations.rows()];
    for (r, c, v) in relations.iter() {
        cols[r].push((c as u32, v.clone()));
    }
    let small: Option<Vec<SparseVec<i64>>> = cols
        .iter()
        .map(|c| {
            c.iter()
                .map(|(i, v)| i64::try_from(v).ok().map(|x| (*i, x)))
                .collect::<Option<Vec<_>>>()
                .map(|p| SparseVec::from_pairs(p).expect("distinct indices"))
        })
        .collect();
    match small {
        Some(cols) => {
            let d = column_divisors(&cols, num_gens);
            let mut factors = d.nontrivial;
            factors.extend(std::iter::repeat(BigInt::zero()).take(num_gens - d.rank));
            FinAbGroup::new(factors)
        }
        None => Ok(present(num_gens, relations)?.group),
    }
}

/// Integer null space of `a` (as column vectors), one basis vector per row.
pub(crate) fn nullspace(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (a.rows(), a.cols());
    let snf = dense_snf(
        a.to_dense(),
        rows,
        cols,
        Track {
            v: true,
            ..Track::default()
        },
    );
    let rank = snf.rank();
    (rank..cols)
        .map(|j| (0..cols).map(|i| snf.v[i][j].clone()).collect())
        .collect()
}

/// A lattice in `Z^n` given by a row basis, with membership solving.
pub(crate) struct Lattice {
    dim: usize,
    /// Diagonal of the SNF of the generating rows (nonzero part).
    d: Vec<BigInt>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn spanned_by(rows: &[Vec<BigInt>], dim: usize) -> Lattice {
        let snf = dense_snf(
            rows.to_vec(),
            rows.len(),
            dim,
            Track {
                v: true,
                v_inv: true,
                ..Track::default()
            },
        );
        let d: Vec<BigInt> = snf.diag.iter().take_while(|x| !x.is_zero()).cloned().collect();
        Lattice {
            dim,
            d,
            v: snf.v,
            v_inv: snf.v_inv,
        }
    }

    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// Basis row `i`.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank())
            .map(|i| self.v_inv[i].iter().map(|x| x * &self.d[i]).collect())
            .collect()
    }

    /// Coefficients `c` with `c * basis = x`, if `x` lies in the lattice.
    pub fn solve(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(x.len(), self.dim);
        let mut xv = vec![BigInt::zero(); self.dim];
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            for (j, out) in xv.iter_mut().enumerate() {
                *out += xk * &self.v[k][j];
            }
        }
        let mut c = Vec::with_capacity(self.rank());
        for (j, val) in xv.iter().enumerate() {
            if j < self.rank() {
                let (q, r) = val.div_rem(&self.d[j]);
                if !r.is_zero() {
                    return None;
                }
                c.push(q);
            } else if !val.is_zero() {
                return None;
            }
        }
        Some(c)
    }
}

/// A homomorphism between groups in invariant-factor form. Column `j` of
/// `matrix` is the image of the `j`-th source generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    pub matrix: IntMatrix,
}

impl AbHom {
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: IntMatrix) -> Result<AbHom> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::invalid(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        for (j, d) in source.factors().iter().enumerate() {
            let image: Vec<BigInt> = (0..target.ngens()).map(|i| matrix.get(i, j) * d).collect();
            if !target.is_zero_element(&image) {
                return Err(Error::invalid(format!(
                    "generator {j} has order {d} but its image does not"
                )));
            }
        }
        Ok(AbHom {
            source,
            target,
            matrix,
        })
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.normalize(&self.matrix.apply(x))
    }

    pub fn identity(g: &FinAbGroup) -> AbHom {
        AbHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ngens()),
        }
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> AbHom {
        AbHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.ngens(), source.ngens()),
        }
    }

    /// `(self, other)`: the map into the direct sum of both targets.
    pub fn pair(&self, other: &AbHom) -> Result<AbHom> {
        if self.source != other.source {
            return Err(Error::invalid("pairing maps with different sources"));
        }
        let n1 = self.target.ngens();
        let target_raw: Vec<BigInt> = self
            .target
            .factors()
            .iter()
            .chain(other.target.factors())
            .cloned()
            .collect();
        // The concatenated factor list is generally not a divisibility chain,
        // so present it and transport the matrix.
        let mut rel = IntMatrix::zeros(target_raw.len(), target_raw.len());
        for (i, d) in target_raw.iter().enumerate() {
            rel.set(i, i, d.clone());
        }
        let p = present(target_raw.len(), &rel)?;
        let m = self.source.ngens();
        let mut matrix = IntMatrix::zeros(p.group.ngens(), m);
        for j in 0..m {
            let mut raw = vec![BigInt::zero(); target_raw.len()];
            for i in 0..n1 {
                raw[i] = self.matrix.get(i, j);
            }
            for i in 0..other.target.ngens() {
                raw[n1 + i] = other.matrix.get(i, j);
            }
            for (i, c) in p.reduce(&raw).into_iter().enumerate() {
                matrix.set(i, j, c);
            }
        }
        AbHom::new(self.source.clone(), p.group, matrix)
    }

    /// Image of the source generators as a sub-lattice problem: returns the
    /// relation lattice of the cokernel.
    fn cokernel_relations(&self) -> IntMatrix {
        let n = self.target.ngens();
        let m = self.source.ngens();
        let mut rel = IntMatrix::zeros(n + m, n);
        for (i, d) in self.target.factors().iter().enumerate() {
            rel.set(i, i, d.clone());
        }
        for (r, c, v) in self.matrix.iter() {
            rel.set(n + c, r, v.clone());
        }
        rel
    }

    pub fn cokernel(&self) -> Result<FinAbGroup> {
        fp_group(self.target.ngens(), &self.cokernel_relations())
    }

    pub fn cokernel_presented(&self) -> Result<Presented> {
        present(self.target.ngens(), &self.cokernel_relations())
    }

    /// Kernel as an abstract group, computed on presentations: the preimage
    /// lattice of the target relations, modulo the source relations.
    pub fn kernel(&self) -> Result<FinAbGroup> {
        Ok(self.kernel_with_generators()?.0)
    }

    /// Kernel group together with its generators expressed in source coordinates.
    pub fn kernel_with_generators(&self) -> Result<(FinAbGroup, Vec<Vec<BigInt>>)> {
        let n = self.target.ngens();
        let m = self.source.ngens();
        // [M | -T] (x, y)^T = 0
        let mut a = IntMatrix::zeros(n, m + n);
        for (r, c, v) in self.matrix.iter() {
            a.set(r, c, v.clone());
        }
        for (i, d) in self.target.factors().iter().enumerate() {
            a.set(i, m + i, -d);
        }
        let null = nullspace(&a);
        let projected: Vec<Vec<BigInt>> = null.iter().map(|v| v[..m].to_vec()).collect();
        let lattice = Lattice::spanned_by(&projected, m);
        let basis = lattice.basis();
        let k = lattice.rank();
        let mut rel = IntMatrix::zeros(m, k);
        for (i, d) in self.source.factors().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let mut x = vec![BigInt::zero(); m];
            x[i] = d.clone();
            let c = lattice
                .solve(&x)
                .ok_or_else(|| Error::internal("source relation outside the kernel lattice"))?;
            for (j, cj) in c.into_iter().enumerate() {
                rel.set(i, j, cj);
            }
        }
        let p = present(k, &rel)?;
        let gens = (0..p.group.ngens())
            .map(|g| {
                let comb = p.generator(g);
                let mut x = vec![BigInt::zero(); m];
                for (b, coef) in basis.iter().zip(comb) {
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += coef * bi;
                    }
                }
                self.source.normalize(&x)
            })
            .collect();
        Ok((p.group, gens))
    }

    /// Order of the image.
    pub fn image_order(&self) -> Result<BigInt> {
        if let Some(src) = self.source.order() {
            let k = self.kernel()?.order().expect("subgroup of a finite group");
            return Ok(src / k);
        }
        if let Some(tgt) = self.target.order() {
            let c = self.cokernel()?.order().expect("quotient of a finite group");
            return Ok(tgt / c);
        }
        let img = self.image()?;
        img.order()
            .ok_or_else(|| Error::invalid("image is infinite"))
    }

    /// The image as an abstract group (`source / kernel`).
    pub fn image(&self) -> Result<FinAbGroup> {
        // Image = column span of M inside Z^n / T.
        let n = self.target.ngens();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for j in 0..self.source.ngens() {
            rows.push((0..n).map(|i| self.matrix.get(i, j)).collect());
        }
        for (i, d) in self.target.factors().iter().enumerate() {
            let mut r = vec![BigInt::zero(); n];
            r[i] = d.clone();
            rows.push(r);
        }
        // image = (span(M) + T) / T
        let big = Lattice::spanned_by(&rows, n);
        let basis = big.basis();
        let k = big.rank();
        let mut rel = IntMatrix::zeros(n, k);
        for (i, d) in self.target.factors().iter().enumerate() {
            let mut x = vec![BigInt::zero(); n];
            x[i] = d.clone();
            let c = big.solve(&x).expect("target relation lies in the span");
            for (j, cj) in c.into_iter().enumerate() {
                rel.set(i, j, cj);
            }
        }
        let _ = basis;
        fp_group(k, &rel)
    }

    pub fn compose(&self, after: &AbHom) -> Result<AbHom> {
        if self.target != after.source {
            return Err(Error::invalid("composition of incompatible maps"));
        }
        let m = after.matrix.mul(&self.matrix)?;
        let mut norm = IntMatrix::zeros(m.rows(), m.cols());
        for j in 0..m.cols() {
            let col: Vec<BigInt> = (0..m.rows()).map(|i| m.get(i, j)).collect();
            for (i, v) in after.target.normalize(&col).into_iter().enumerate() {
                norm.set(i, j, v);
            }
        }
        AbHom::new(self.source.clone(), after.target.clone(), norm)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.is_trivial())
    }
}

/// Build a group element from small integers.
pub fn coords(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> FinAbGroup {
        FinAbGroup::from_orders(&f.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn normal_form_of_orders() {
        assert_eq!(g(&[2, 3]), FinAbGroup::cyclic(6));
        assert_eq!(g(&[4, 2, 1]).to_strings(), vec!["2", "4"]);
        assert_eq!(g(&[0, 6]).to_strings(), vec!["6", "0"]);
        assert!(FinAbGroup::new(vec![BigInt::from(4), BigInt::from(2)]).is_err());
    }

    #[test]
    fn fp_group_examples() {
        let rel = IntMatrix::from_rows(&[vec![6]]).unwrap();
        assert_eq!(fp_group(1, &rel).unwrap(), FinAbGroup::cyclic(6));
        let rel = IntMatrix::zeros(0, 2);
        assert_eq!(fp_group(2, &rel).unwrap(), FinAbGroup::free(2));
        assert!(fp_group(3, &IntMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn cokernel_of_times_four() {
        let h = AbHom::new(
            FinAbGroup::integers(),
            FinAbGroup::integers(),
            IntMatrix::from_rows(&[vec![4]]).unwrap(),
        )
        .unwrap();
        assert_eq!(h.cokernel().unwrap(), FinAbGroup::cyclic(4));
        assert!(h.kernel().unwrap().is_trivial());
    }

    #[test]
    fn kernel_of_z4_onto_z2_by_enumeration() {
        let h = AbHom::new(
            FinAbGroup::cyclic(4),
            FinAbGroup::cyclic(2),
            IntMatrix::from_rows(&[vec![1]]).unwrap(),
        )
        .unwrap();
        // enumerate the 4 elements and count those sent to zero
        let zeros = h
            .source
            .elements()
            .unwrap()
            .iter()
            .filter(|x| h.target.is_zero_element(&h.apply(x)))
            .count();
        assert_eq!(zeros, 2);
        assert_eq!(h.kernel().unwrap(), FinAbGroup::cyclic(2));
        assert_eq!(h.image_order().unwrap(), BigInt::from(2));
    }

    #[test]
    fn hom_must_respect_orders() {
        let bad = AbHom::new(
            FinAbGroup::cyclic(2),
            FinAbGroup::cyclic(3),
            IntMatrix::from_rows(&[vec![1]]).unwrap(),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn kernel_generators_lie_in_kernel() {
        // Z/2 + Z/4 -> Z/4, (a, b) -> 2a + b
        let src = g(&[2, 4]);
        let h = AbHom::new(
            src.clone(),
            FinAbGroup::cyclic(4),
            IntMatrix::from_rows(&[vec![2, 1]]).unwrap(),
        )
        .unwrap();
        let (k, gens) = h.kernel_with_generators().unwrap();
        assert_eq!(k.order().unwrap(), BigInt::from(2));
        for x in gens {
            assert!(h.target.is_zero_element(&h.apply(&x)));
        }
    }

    #[test]
    fn presented_reduction_is_consistent() {
        // <a, b | 2a, 4b, 2a + 2b> = Z/2 + Z/2
        let rel = IntMatrix::from_rows(&[vec![2, 0], vec![0, 4], vec![2, 2]]).unwrap();
        let p = present(2, &rel).unwrap();
        assert_eq!(p.group, g(&[2, 2]));
        for r in 0..3 {
            let raw: Vec<BigInt> = (0..2).map(|c| rel.get(r, c)).collect();
            assert!(p.reduce(&raw).iter().all(Zero::is_zero));
        }
        for i in 0..p.group.ngens() {
            let mut e = vec![BigInt::zero(); p.group.ngens()];
            e[i] = BigInt::one();
            assert_eq!(p.reduce(p.generator(i)), e);
        }
    }

    proptest::proptest! {
        #[test]
        fn fp_group_ignores_row_operations(
            rows in proptest::collection::vec(proptest::collection::vec(-9i64..9, 3), 1..5),
            seed in 0usize..1000,
        ) {
            let m = IntMatrix::from_rows(&rows).unwrap();
            let base = fp_group(3, &m).unwrap();
            // shuffle rows and add a multiple of one row to another
            let mut shuffled = rows.clone();
            shuffled.rotate_left(seed % rows.len());
            if shuffled.len() > 1 {
                let k = (seed % 7) as i64 - 3;
                let src = shuffled[0].clone();
                for (x, y) in shuffled[1].iter_mut().zip(src) {
                    *x += k * y;
                }
            }
            let m2 = IntMatrix::from_rows(&shuffled).unwrap();
            proptest::prop_assert_eq!(fp_group(3, &m2).unwrap(), base.clone());
            proptest::prop_assert_eq!(present(3, &m2).unwrap().group, base);
        }
    }
}
