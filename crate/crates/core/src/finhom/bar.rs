use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::group::{FiniteGroup, GroupHom};
use crate::abelian::sparse::{column_divisors, Echelon, SparseVec};
use crate::abelian::{nullspace, present, AbHom, FinAbGroup, IntMatrix, Lattice, Presented};
use crate::error::{Error, Result};

/// Largest group order allowed for bar homology in each degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarBudget {
    pub max_order: [usize; 4],
    /// Cap on `dim C_{n+1}` for explicit cycle representatives (induced maps).
    pub max_dense: usize,
}

impl Default for BarBudget {
    fn default() -> Self {
        BarBudget {
            max_order: [usize::MAX, 4096, 32, 16],
            max_dense: 5000,
        }
    }
}

impl BarBudget {
    /// Refuse everything above the trivial group.
    pub fn zero() -> Self {
        BarBudget {
            max_order: [0; 4],
            max_dense: 0,
        }
    }

    fn check(&self, g: &FiniteGroup, n: usize) -> Result<()> {
        if n > 3 {
            return Err(Error::invalid(format!("bar homology is limited to degree 3, asked for {n}")));
        }
        let cap = self.max_order[n];
        if g.order() > cap {
            let m = g.order() as u128 - 1;
            return Err(Error::Budget(format!(
                "H_{n}({}) needs C_{} of rank ({}-1)^{} = {}; the degree-{n} budget allows order <= {cap}",
                g.name(),
                n + 1,
                g.order(),
                n + 1,
                m.pow(n as u32 + 1)
            )));
        }
        Ok(())
    }
}

/// Normalized bar complex with trivial coefficients: `C_n` is free on
/// `[g_1 | ... | g_n]` with every `g_i` different from the identity.
struct Bar<'a> {
    g: &'a FiniteGroup,
    /// non-identity elements, in order
    elems: Vec<usize>,
    /// position of each element in `elems`, `u32::MAX` for the identity
    pos: Vec<u32>,
}

impl<'a> Bar<'a> {
    fn new(g: &'a FiniteGroup) -> Self {
        let elems: Vec<usize> = (0..g.order()).filter(|&x| x != g.identity()).collect();
        let mut pos = vec![u32::MAX; g.order()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i as u32;
        }
        Bar { g, elems, pos }
    }

    fn rank(&self, n: usize) -> usize {
        self.elems.len().pow(n as u32)
    }

    fn decode(&self, mut idx: usize, n: usize) -> Vec<usize> {
        let m = self.elems.len();
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = self.elems[idx % m];
            idx /= m;
        }
        t
    }

    /// Index of a tuple of group elements, or `None` if degenerate.
    fn encode(&self, t: &[usize]) -> Option<usize> {
        let m = self.elems.len();
        t.iter().try_fold(0usize, |acc, &x| {
            let p = self.pos[x];
            (p != u32::MAX).then(|| acc * m + p as usize)
        })
    }

    /// `d[g_1|...|g_n] = [g_2|...] + sum_i (-1)^i [..|g_i g_{i+1}|..] + (-1)^n [..|g_{n-1}]`.
    fn boundary(&self, n: usize, idx: usize) -> SparseVec<i64> {
        if n <= 1 {
            return SparseVec::new();
        }
        let t = self.decode(idx, n);
        let mut pairs = Vec::with_capacity(n + 1);
        let mut push = |face: &[usize], sign: i64| {
            if let Some(j) = self.encode(face) {
                pairs.push((j as u32, sign));
            }
        };
        push(&t[1..], 1);
        for i in 0..n - 1 {
            let mut face = Vec::with_capacity(n - 1);
            face.extend_from_slice(&t[..i]);
            face.push(self.g.mul(t[i], t[i + 1]));
            face.extend_from_slice(&t[i + 2..]);
            push(&face, if (i + 1) % 2 == 0 { 1 } else { -1 });
        }
        push(&t[..n - 1], if n % 2 == 0 { 1 } else { -1 });
        SparseVec::from_pairs(pairs).expect("small coefficients")
    }

    fn columns(&self, n: usize) -> Vec<SparseVec<i64>> {
        (0..self.rank(n)).into_par_iter().map(|i| self.boundary(n, i)).collect()
    }

    fn boundary_rank(&self, n: usize) -> usize {
        if n == 0 {
            return 0;
        }
        let mut ech = Echelon::<i64>::new(self.rank(n - 1));
        for c in self.columns(n) {
            if ech.push(c.clone()).is_err() {
                return column_divisors(&self.columns(n), self.rank(n - 1)).rank;
            }
        }
        ech.rank()
    }
}

/// `H_n(G; Z)` for `n <= 3` from the normalized bar complex.
pub fn bar_homology(g: &FiniteGroup, n: usize) -> Result<FinAbGroup> {
    bar_homology_with(g, n, &BarBudget::default())
}

pub fn bar_homology_with(g: &FiniteGroup, n: usize, budget: &BarBudget) -> Result<FinAbGroup> {
    budget.check(g, n)?;
    if n == 0 {
        return Ok(FinAbGroup::integers());
    }
    let bar = Bar::new(g);
    let next = column_divisors(&bar.columns(n + 1), bar.rank(n));
    let free = bar.rank(n) - bar.boundary_rank(n) - next.rank;
    let mut orders = next.nontrivial;
    orders.extend(std::iter::repeat_n(BigInt::zero(), free));
    Ok(FinAbGroup::from_orders(&orders))
}

/// `H_n(G)` with explicit cycles: coordinates for any cycle and a cycle
/// for each invariant generator.
pub struct CycleHomology {
    pub group: FinAbGroup,
    n: usize,
    cycles: Lattice,
    presented: Presented,
    basis: Vec<Vec<BigInt>>,
}

impl CycleHomology {
    /// Class of a cycle given on the bar basis of degree `n`.
    pub fn class_of(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self
            .cycles
            .solve(z)
            .ok_or_else(|| Error::invalid("chain is not a cycle"))?;
        Ok(self.presented.reduce(&c))
    }

    /// A cycle representing invariant generator `i`.
    pub fn generator_cycle(&self, i: usize) -> Vec<BigInt> {
        let comb = self.presented.generator(i);
        let dim = self.basis.first().map_or(0, Vec::len);
        let mut z = vec![BigInt::zero(); dim];
        for (b, c) in self.basis.iter().zip(comb) {
            for (zi, bi) in z.iter_mut().zip(b) {
                *zi += c * bi;
            }
        }
        z
    }

    pub fn degree(&self) -> usize {
        self.n
    }
}

pub fn cycle_homology(g: &FiniteGroup, n: usize, budget: &BarBudget) -> Result<CycleHomology> {
    budget.check(g, n)?;
    if n == 0 {
        return Err(Error::invalid("explicit cycles start in degree 1"));
    }
    let bar = Bar::new(g);
    if bar.rank(n + 1) > budget.max_dense {
        return Err(Error::Budget(format!(
            "explicit H_{n}({}) needs a dense C_{} of rank {} (cap {})",
            g.name(),
            n + 1,
            bar.rank(n + 1),
            budget.max_dense
        )));
    }
    let dim = bar.rank(n);
    let mut dn = IntMatrix::zeros(bar.rank(n - 1), dim);
    for (j, col) in bar.columns(n).iter().enumerate() {
        for (&i, &v) in col.idx.iter().zip(&col.val) {
            dn.set(i as usize, j, BigInt::from(v));
        }
    }
    let basis = if n == 1 {
        (0..dim)
            .map(|i| {
                let mut e = vec![BigInt::zero(); dim];
                e[i] = BigInt::from(1);
                e
            })
            .collect()
    } else {
        nullspace(&dn)
    };
    let cycles = Lattice::spanned_by(&basis, dim);
    let basis = cycles.basis();
    let k = basis.len();
    let next = bar.columns(n + 1);
    let mut rel = IntMatrix::zeros(next.len(), k);
    for (r, col) in next.iter().enumerate() {
        let mut z = vec![BigInt::zero(); dim];
        for (&i, &v) in col.idx.iter().zip(&col.val) {
            z[i as usize] = BigInt::from(v);
        }
        let c = cycles
            .solve(&z)
            .ok_or_else(|| Error::internal("boundary is not a cycle"))?;
        for (j, x) in c.into_iter().enumerate() {
            if !x.is_zero() {
                rel.set(r, j, x);
            }
        }
    }
    let presented = present(k, &rel)?;
    Ok(CycleHomology {
        group: presented.group.clone(),
        n,
        cycles,
        presented,
        basis,
    })
}

/// The map `H_n(G) -> H_n(H)` induced by `[g_1|...|g_n] -> [h g_1|...|h g_n]`.
pub fn induced_map(h: &GroupHom, source: &FiniteGroup, target: &FiniteGroup, n: usize) -> Result<AbHom> {
    induced_map_with(h, source, target, n, &BarBudget::default())
}

pub fn induced_map_with(
    h: &GroupHom,
    source: &FiniteGroup,
    target: &FiniteGroup,
    n: usize,
    budget: &BarBudget,
) -> Result<AbHom> {
    h.check_groups(source, target)?;
    if n == 0 {
        return Ok(AbHom::identity(&FinAbGroup::integers()));
    }
    let hs = cycle_homology(source, n, budget)?;
    let ht = cycle_homology(target, n, budget)?;
    let (bs, bt) = (Bar::new(source), Bar::new(target));
    let mut m = IntMatrix::zeros(ht.group.ngens(), hs.group.ngens());
    for i in 0..hs.group.ngens() {
        let z = hs.generator_cycle(i);
        let mut image = vec![BigInt::zero(); bt.rank(n)];
        for (idx, c) in z.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t: Vec<usize> = bs.decode(idx, n).into_iter().map(|x| h.apply(x)).collect();
            if let Some(j) = bt.encode(&t) {
                image[j] += c;
            }
        }
        for (r, v) in ht.class_of(&image)?.into_iter().enumerate() {
            m.set(r, i, v);
        }
    }
    AbHom::new(hs.group.clone(), ht.group.clone(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::homology_abelian;
    use crate::finhom::group::{abelian_group, dihedral};

    #[test]
    fn cyclic_groups() {
        let z4 = abelian_group(&[4]).unwrap();
        assert_eq!(bar_homology(&z4, 1).unwrap(), FinAbGroup::cyclic(4));
        assert!(bar_homology(&z4, 2).unwrap().is_trivial());
        assert_eq!(bar_homology(&z4, 3).unwrap(), FinAbGroup::cyclic(4));
    }

    #[test]
    fn klein_four_matches_kunneth() {
        let v4 = abelian_group(&[2, 2]).unwrap();
        let g = FinAbGroup::from_orders(&[2.into(), 2.into()]);
        for n in 0..=3 {
            assert_eq!(bar_homology(&v4, n).unwrap(), homology_abelian(&g, n).unwrap(), "H_{n}");
        }
    }

    #[test]
    fn budget_gate() {
        let g = abelian_group(&[17]).unwrap();
        match bar_homology(&g, 3) {
            Err(Error::Budget(msg)) => assert!(msg.contains("65536"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(bar_homology_with(&dihedral(1).unwrap(), 1, &BarBudget::zero()).is_err());
    }

    #[test]
    fn explicit_cycles_agree() {
        let d3 = dihedral(3).unwrap();
        for n in 1..=3 {
            let c = cycle_homology(&d3, n, &BarBudget::default()).unwrap();
            assert_eq!(c.group, bar_homology(&d3, n).unwrap());
        }
    }

    #[test]
    fn induced_maps() {
        let d1 = dihedral(1).unwrap();
        let d2 = dihedral(2).unwrap();
        let inc = GroupHom::from_generators(&d1, &d2, &[2]).unwrap();
        let f = induced_map(&inc, &d1, &d2, 1).unwrap();
        assert!(f.is_injective().unwrap());
        assert_eq!(f.target.to_strings(), ["2", "2"]);
        let id = GroupHom::identity(&d2);
        let f = induced_map(&id, &d2, &d2, 3).unwrap();
        assert_eq!(f, AbHom::identity(&f.source));
        let t = GroupHom::trivial(&d2, &d1);
        let f = induced_map(&t, &d2, &d1, 3).unwrap();
        assert!(f.matrix.is_zero());
    }

    #[test]
    fn dihedral_homology() {
        // H_n(D_m) for m odd: Z/2, 0, Z/2m; for m = 2: (2,2), 2, (2,2,2)
        let expect: [(usize, [&[&str]; 3]); 4] = [
            (1, [&["2"], &[], &["2"]]),
            (2, [&["2", "2"], &["2"], &["2", "2", "2"]]),
            (3, [&["2"], &[], &["6"]]),
            (5, [&["2"], &[], &["10"]]),
        ];
        for (m, rows) in expect {
            let g = dihedral(m).unwrap();
            for (n, want) in rows.iter().enumerate() {
                let got = bar_homology(&g, n + 1).unwrap();
                assert_eq!(got.to_strings(), want.to_vec(), "H_{} of D_{m}", n + 1);
            }
        }
    }

    #[test]
    fn small_abelian_groups_match_kunneth() {
        for factors in [vec![2], vec![3], vec![6], vec![2, 4], vec![3, 3], vec![2, 2, 2], vec![4, 4], vec![2, 6]] {
            let g = abelian_group(&factors).unwrap();
            let a = FinAbGroup::from_orders(&factors.iter().map(|&f| f.into()).collect::<Vec<_>>());
            for n in 1..=3 {
                assert_eq!(bar_homology(&g, n).unwrap(), homology_abelian(&a, n).unwrap(), "H_{n} of {factors:?}");
            }
        }
    }
}
