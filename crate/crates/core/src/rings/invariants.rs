use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::FiniteRing;
use crate::abelian::{abelian_from_cayley, fp_group, AbHom, CayleyStructure, FinAbGroup, IntMatrix};

/// The unit group in invariant-factor form with discrete logarithms.
#[derive(Clone, Debug)]
pub struct UnitGroupData {
    structure: CayleyStructure,
    /// `gens[i]` is the unit corresponding to the `i`-th invariant factor.
    gens: Vec<usize>,
}

impl UnitGroupData {
    pub fn group(&self) -> &FinAbGroup {
        &self.structure.presented.group
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    /// Exponent vector of a unit, reduced into `[0, d_i)`.
    pub fn log(&self, u: usize) -> Option<Vec<BigInt>> {
        self.structure.log(u)
    }

    /// Unit with the given exponent vector.
    pub fn exp(&self, ring: &FiniteRing, e: &[BigInt]) -> usize {
        let group = self.group();
        let e = group.normalize(e);
        self.gens
            .iter()
            .zip(&e)
            .fold(ring.one(), |acc, (&g, k)| {
                ring.mul(acc, ring.pow(g, k.to_u64().expect("reduced exponent")))
            })
    }
}

/// One local factor `eA` of a finite ring, cut out by a primitive idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub idempotent: usize,
    pub order: usize,
    pub residue_field_size: usize,
}

impl FiniteRing {
    /// `A^x` with generators and logarithms, computed once.
    pub fn unit_group(&self) -> &UnitGroupData {
        self.unit_group.get_or_init(|| {
            let structure = abelian_from_cayley(self.order(), self.one(), self.units(), |a, b| {
                self.mul(a, b)
            })
            .expect("units form a finite abelian group");
            let raw_orders: Vec<u64> = structure
                .gens
                .iter()
                .map(|&g| {
                    let mut k = 1;
                    let mut y = g;
                    while y != self.one() {
                        y = self.mul(y, g);
                        k += 1;
                    }
                    k
                })
                .collect();
            let gens = (0..structure.presented.group.ngens())
                .map(|i| {
                    let comb = structure.presented.generator(i);
                    structure
                        .gens
                        .iter()
                        .zip(comb)
                        .zip(&raw_orders)
                        .fold(self.one(), |acc, ((&g, c), &o)| {
                            let e = c.clone() % BigInt::from(o);
                            let e = if e < BigInt::zero() { e + o } else { e };
                            self.mul(acc, self.pow(g, e.to_u64().expect("small")))
                        })
                })
                .collect();
            let data = UnitGroupData { structure, gens };
            debug_assert!(self
                .units()
                .iter()
                .all(|&u| data.exp(self, &data.log(u).expect("unit")) == u));
            data
        })
    }

    /// The additive group with coordinates for every element.
    pub fn additive_structure(&self) -> &CayleyStructure {
        self.additive.get_or_init(|| {
            let all: Vec<usize> = self.elements().collect();
            abelian_from_cayley(self.order(), 0, &all, |a, b| self.add(a, b))
                .expect("additive group of a ring")
        })
    }

    /// `W_A = {a : a(1 - a) is a unit}`.
    pub fn wedge_set(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.is_unit(self.mul(a, self.sub(self.one(), a))))
            .collect()
    }

    /// `A / <a - 1 : a a unit>` as an additive group.
    pub fn coinvariants_a(&self) -> FinAbGroup {
        let add = self.additive_structure();
        let base = &add.presented.group;
        let k = base.ngens();
        let mut rows: Vec<Vec<BigInt>> = base
            .factors()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut r = vec![BigInt::zero(); k];
                r[i] = d.clone();
                r
            })
            .collect();
        for &u in self.units() {
            rows.push(add.log(self.sub(u, self.one())).expect("ring element"));
        }
        let m = IntMatrix::from_rows(&rows).expect("rectangular");
        if k == 0 {
            return FinAbGroup::trivial();
        }
        fp_group(k, &m).expect("well-formed presentation")
    }

    fn times_two_on_units(&self) -> AbHom {
        let g = self.unit_group().group().clone();
        let k = g.ngens();
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k {
            m.set(i, i, BigInt::from(2));
        }
        AbHom::new(g.clone(), g, m).expect("multiplication by 2 is a homomorphism")
    }

    /// `G_A = A^x / (A^x)^2`.
    pub fn square_class_group(&self) -> FinAbGroup {
        self.times_two_on_units().cokernel().expect("finite group")
    }

    /// `mu_2(A) = {a : a^2 = 1}`.
    pub fn mu2(&self) -> FinAbGroup {
        self.times_two_on_units().kernel().expect("finite group")
    }

    /// Non-units closed under addition.
    pub fn is_local(&self) -> bool {
        let non_units: Vec<usize> = self.elements().filter(|&a| !self.is_unit(a)).collect();
        self.order() > 1
            && non_units
                .iter()
                .all(|&a| non_units.iter().all(|&b| !self.is_unit(self.add(a, b))))
    }

    /// Residue field size `|A/m|` of a local ring.
    pub fn residue_field_size(&self) -> Option<usize> {
        self.is_local()
            .then(|| self.order() / (self.order() - self.units().len()))
    }

    /// Decomposition into local factors via primitive idempotents, ordered
    /// by idempotent index.
    pub fn local_factors(&self) -> Vec<LocalFactor> {
        if self.order() == 1 {
            return Vec::new();
        }
        let idem: Vec<usize> = self
            .elements()
            .filter(|&e| e != 0 && self.mul(e, e) == e)
            .collect();
        // primitive: no nonzero idempotent f != e with f e = f
        let primitive: Vec<usize> = idem
            .iter()
            .copied()
            .filter(|&e| !idem.iter().any(|&f| f != e && self.mul(f, e) == f))
            .collect();
        primitive
            .into_iter()
            .map(|e| {
                let mut ideal: Vec<usize> = self.elements().map(|a| self.mul(e, a)).collect();
                ideal.sort_unstable();
                ideal.dedup();
                let units = ideal
                    .iter()
                    .filter(|&&x| ideal.iter().any(|&y| self.mul(x, y) == e))
                    .count();
                LocalFactor {
                    idempotent: e,
                    order: ideal.len(),
                    residue_field_size: ideal.len() / (ideal.len() - units),
                }
            })
            .collect()
    }

    /// Residue field sizes of the local factors, sorted.
    pub fn residue_field_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.local_factors().iter().map(|f| f.residue_field_size).collect();
        v.sort_unstable();
        v
    }

    /// A quotient `F_2 x F_2` or `F_2 x F_3` of the ring, if one exists;
    /// such rings are not universal for GE_2.
    pub fn menal_witness(&self) -> Option<String> {
        let sizes = self.residue_field_sizes();
        let twos = sizes.iter().filter(|&&s| s == 2).count();
        if twos >= 2 {
            Some("surjects onto Z/2 x Z/2".into())
        } else if twos == 1 && sizes.contains(&3) {
            Some("surjects onto Z/6".into())
        } else {
            None
        }
    }
}
