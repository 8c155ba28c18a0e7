use num_bigint::BigInt;
use num_traits::Zero;

use crate::abelian::{
    exterior_square_presented, present, sym_square_presented, tensor_presented, AbHom, Bilinear, FinAbGroup,
    IntMatrix, Presented,
};
use crate::error::{Error, Result};
use crate::rings::FiniteRing;

/// The scissors congruence group on symbols `[a]`, `a` in `W_A`.
#[derive(Clone, Debug)]
pub struct PreBlochGroup {
    pub group: FinAbGroup,
    ring_spec: String,
    gen_labels: Vec<usize>,
    relations: Vec<Vec<(usize, i64)>>,
    presented: Presented,
}

impl PreBlochGroup {
    /// Present the group on `labels` with relations given as
    /// `(ring element, coefficient)` lists.
    pub(crate) fn from_relations(r: &FiniteRing, labels: Vec<usize>, rows: &[Vec<(usize, i64)>]) -> Result<Self> {
        let relations: Vec<Vec<(usize, i64)>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(a, c)| {
                        labels
                            .binary_search(&a)
                            .map(|i| (i, c))
                            .map_err(|_| Error::internal(format!("symbol {a} is not a generator")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let mut m = IntMatrix::zeros(relations.len(), labels.len());
        for (i, row) in relations.iter().enumerate() {
            for &(j, c) in row {
                m.add_to(i, j, &BigInt::from(c));
            }
        }
        let presented = present(labels.len(), &m)?;
        Ok(PreBlochGroup {
            group: presented.group.clone(),
            ring_spec: r.spec_string(),
            gen_labels: labels,
            relations,
            presented,
        })
    }

    pub fn ring_spec(&self) -> &str {
        &self.ring_spec
    }

    /// Ring elements labelling the generators, ascending.
    pub fn gen_labels(&self) -> &[usize] {
        &self.gen_labels
    }

    /// Relations as `(generator index, coefficient)` lists.
    pub fn relations(&self) -> &[Vec<(usize, i64)>] {
        &self.relations
    }

    /// Coordinates of generator `i` in the reduced group.
    pub fn reduction(&self, i: usize) -> Vec<BigInt> {
        self.presented.reduce_sparse(&[(i, BigInt::from(1))])
    }

    /// Coordinates of `[a]`, if `a` is in `W_A`.
    pub fn symbol(&self, a: usize) -> Option<Vec<BigInt>> {
        self.gen_labels.binary_search(&a).ok().map(|i| self.reduction(i))
    }

    /// Invariant generator `i` as a combination of symbols.
    pub fn generator(&self, i: usize) -> &[BigInt] {
        self.presented.generator(i)
    }

    /// The homomorphism out of `P(A)` given on symbols, checked on every
    /// relation.
    fn induced(&self, target: &FinAbGroup, image: impl Fn(usize) -> Vec<BigInt>) -> Result<AbHom> {
        let images: Vec<Vec<BigInt>> = self.gen_labels.iter().map(|&a| image(a)).collect();
        for (k, rel) in self.relations.iter().enumerate() {
            let mut sum = vec![BigInt::zero(); target.ngens()];
            for &(j, c) in rel {
                for (s, x) in sum.iter_mut().zip(&images[j]) {
                    *s += x * c;
                }
            }
            if !target.is_zero_element(&sum) {
                return Err(Error::internal(format!(
                    "relation {k} of P({}) does not map to zero",
                    self.ring_spec
                )));
            }
        }
        let mut m = IntMatrix::zeros(target.ngens(), self.group.ngens());
        for g in 0..self.group.ngens() {
            let mut col = vec![BigInt::zero(); target.ngens()];
            for (j, c) in self.presented.generator(g).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (s, x) in col.iter_mut().zip(&images[j]) {
                    *s += x * c;
                }
            }
            for (i, v) in target.normalize(&col).into_iter().enumerate() {
                m.set(i, g, v);
            }
        }
        AbHom::new(self.group.clone(), target.clone(), m)
    }
}

/// Free on `W_A` modulo
/// `[a] - [b] + [b/a] - [(1 - a^-1)/(1 - b^-1)] + [(1 - a)/(1 - b)]`
/// for every ordered pair with `a, b, a/b` in `W_A`.
pub fn prebloch_classical(r: &FiniteRing) -> Result<PreBlochGroup> {
    let w = r.wedge_set();
    let one = r.one();
    let mut rows = Vec::new();
    for &a in &w {
        for &b in &w {
            let a_over_b = r.div(a, b).expect("unit");
            if w.binary_search(&a_over_b).is_err() {
                continue;
            }
            let ai = r.inv(a).expect("unit");
            let bi = r.inv(b).expect("unit");
            let t3 = r.div(b, a).expect("unit");
            let t4 = r.div(r.sub(one, ai), r.sub(one, bi)).expect("1 - b^-1 is a unit");
            let t5 = r.div(r.sub(one, a), r.sub(one, b)).expect("1 - b is a unit");
            rows.push(vec![(a, 1), (b, -1), (t3, 1), (t4, -1), (t5, 1)]);
        }
    }
    PreBlochGroup::from_relations(r, w, &rows)
}

fn check_ring(p: &PreBlochGroup, r: &FiniteRing) -> Result<()> {
    if p.ring_spec != r.spec_string() {
        return Err(Error::invalid(format!(
            "pre-Bloch group over {} used with ring {}",
            p.ring_spec,
            r.spec_string()
        )));
    }
    Ok(())
}

/// The symmetric square of `A^x` with its bilinear map.
pub fn sym_square_units(r: &FiniteRing) -> Result<Bilinear> {
    sym_square_presented(r.unit_group().group())
}

/// `lambda: [a] -> a (x) (1 - a)` into `S^2(A^x)`.
pub fn lambda_s2(p: &PreBlochGroup, r: &FiniteRing) -> Result<AbHom> {
    check_ring(p, r)?;
    let s2 = sym_square_units(r)?;
    let u = r.unit_group();
    p.induced(s2.group(), |a| {
        s2.apply(&u.log(a).expect("unit"), &u.log(r.sub(r.one(), a)).expect("unit"))
    })
}

/// `lambda_E: [a] -> 2 (a ^ (1 - a))` into `Lambda^2(A^x)`.
pub fn lambda_exterior(p: &PreBlochGroup, r: &FiniteRing) -> Result<AbHom> {
    check_ring(p, r)?;
    let l2 = exterior_square_presented(r.unit_group().group())?;
    let u = r.unit_group();
    p.induced(l2.group(), |a| {
        let v = l2.apply(&u.log(a).expect("unit"), &u.log(r.sub(r.one(), a)).expect("unit"));
        l2.group().normalize(&v.iter().map(|x| x * 2).collect::<Vec<_>>())
    })
}

/// `B(A) = ker lambda`.
pub fn bloch_group(r: &FiniteRing) -> Result<FinAbGroup> {
    lambda_s2(&prebloch_classical(r)?, r)?.kernel()
}

/// The GE_2-Bloch group `ker(P(A) -> Lambda^2 A^x)`, for local rings with
/// residue field of more than four elements.
pub fn ge2_bloch_group(r: &FiniteRing) -> Result<FinAbGroup> {
    require_local_residue(r, &[2, 3, 4])?;
    lambda_exterior(&prebloch_classical(r)?, r)?.kernel()
}

pub(crate) fn require_local_residue(r: &FiniteRing, excluded: &[usize]) -> Result<usize> {
    let k = r
        .residue_field_size()
        .ok_or_else(|| Error::hypothesis(format!("{} is not a local ring", r.spec_string())))?;
    if excluded.contains(&k) {
        return Err(Error::hypothesis(format!(
            "residue field of {} has {k} elements (excluded: {excluded:?})",
            r.spec_string()
        )));
    }
    Ok(k)
}

/// `K_2^M(A)` as `A^x (x) A^x / <a (x) (1 - a) : a in W_A>`, with the
/// projection from the tensor square.
pub struct MilnorK2 {
    pub group: FinAbGroup,
    tensor: Bilinear,
    quotient: Presented,
}

impl MilnorK2 {
    /// Coordinates of `{x, y}` for unit exponent vectors `x`, `y`.
    pub fn symbol(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.quotient.reduce(&self.tensor.apply(x, y))
    }

    /// Project a raw combination of generator pairs `(i, j) -> i * n + j`.
    pub fn reduce_pairs(&self, raw: &[BigInt]) -> Vec<BigInt> {
        self.quotient.reduce(&self.tensor.presented().reduce(raw))
    }

    /// The Milnor K_2 hypothesis (residue field larger than five).
    pub fn hypothesis_met(r: &FiniteRing) -> bool {
        r.residue_field_sizes().iter().all(|&k| k > 5)
    }
}

pub fn milnor_k2_presented(r: &FiniteRing) -> Result<MilnorK2> {
    let u = r.unit_group();
    let t = tensor_presented(u.group(), u.group())?;
    let w = r.wedge_set();
    let mut m = IntMatrix::zeros(t.group().ngens(), w.len());
    for (j, &a) in w.iter().enumerate() {
        let v = t.apply(&u.log(a).expect("unit"), &u.log(r.sub(r.one(), a)).expect("unit"));
        for (i, x) in v.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    let steinberg = AbHom::new(FinAbGroup::free(w.len()), t.group().clone(), m)?;
    let quotient = steinberg.cokernel_presented()?;
    Ok(MilnorK2 {
        group: quotient.group.clone(),
        tensor: t,
        quotient,
    })
}

pub fn milnor_k2(r: &FiniteRing) -> Result<FinAbGroup> {
    Ok(milnor_k2_presented(r)?.group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::coords;

    fn ring(s: &str) -> FiniteRing {
        FiniteRing::parse(s).unwrap()
    }

    #[test]
    fn degenerate_fields() {
        let p = prebloch_classical(&ring("gf:2^1")).unwrap();
        assert!(p.group.is_trivial());
        assert!(p.gen_labels().is_empty());
        let r = ring("gf:3^1");
        let p = prebloch_classical(&r).unwrap();
        assert_eq!(p.gen_labels(), &[2]);
        assert!(p.relations().is_empty());
        assert_eq!(p.group, FinAbGroup::integers());
        bloch_group(&ring("gf:2^1")).unwrap();
        bloch_group(&r).unwrap();
    }

    #[test]
    fn lambda_on_f3_has_order_two_image() {
        let r = ring("gf:3^1");
        let p = prebloch_classical(&r).unwrap();
        let l = lambda_s2(&p, &r).unwrap();
        assert_eq!(l.target, FinAbGroup::cyclic(2));
        assert_eq!(l.image_order().unwrap(), BigInt::from(2));
    }

    #[test]
    fn lambda_of_two_over_f5() {
        // 2 generates F5^x; 1 - 2 = 4 = 2^2
        let r = ring("gf:5^1");
        let p = prebloch_classical(&r).unwrap();
        let l = lambda_s2(&p, &r).unwrap();
        let s2 = sym_square_units(&r).unwrap();
        assert_eq!(r.unit_group().log(2).unwrap(), coords(&[1]));
        let expected = s2.apply(&coords(&[1]), &coords(&[2]));
        assert_eq!(l.apply(&p.symbol(2).unwrap()), expected);
    }

    #[test]
    fn relation_vanishes_over_f7() {
        let r = ring("gf:7^1");
        let p = prebloch_classical(&r).unwrap();
        let rel = &p.relations()[0];
        let s2 = sym_square_units(&r).unwrap();
        let u = r.unit_group();
        let mut sum = vec![BigInt::zero(); s2.group().ngens()];
        for &(j, c) in rel {
            let a = p.gen_labels()[j];
            for (s, x) in sum.iter_mut().zip(s2.apply(&u.log(a).unwrap(), &u.log(r.sub(1, a)).unwrap())) {
                *s += x * c;
            }
        }
        assert!(s2.group().is_zero_element(&sum));
    }

    #[test]
    fn k2_of_small_fields_vanishes() {
        assert!(milnor_k2(&ring("gf:5^1")).unwrap().is_trivial());
        assert!(milnor_k2(&ring("gf:7^1")).unwrap().is_trivial());
        assert!(!MilnorK2::hypothesis_met(&ring("gf:3^1")));
        milnor_k2(&ring("gf:3^1")).unwrap();
    }

    #[test]
    fn ge2_bloch_of_fields_is_prebloch() {
        for s in ["gf:5^1", "gf:7^1", "gf:3^2"] {
            let r = ring(s);
            assert_eq!(ge2_bloch_group(&r).unwrap(), prebloch_classical(&r).unwrap().group, "{s}");
        }
        assert!(matches!(ge2_bloch_group(&ring("gf:2^2")), Err(Error::Hypothesis(_))));
        assert!(matches!(ge2_bloch_group(&ring("zmod:6")), Err(Error::Hypothesis(_))));
    }
}
