use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;

use super::group::{present, Presented};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Structure of a finite abelian group given by an operation on indices.
#[derive(Clone, Debug)]
pub struct CayleyStructure {
    pub presented: Presented,
    /// Chosen generators, in the order their words are recorded.
    pub gens: Vec<usize>,
    /// Exponent vector over `gens` for every element of the group.
    words: Vec<Option<Vec<i64>>>,
}

impl CayleyStructure {
    /// Coordinates of `x` in the invariant-factor basis.
    pub fn log(&self, x: usize) -> Option<Vec<BigInt>> {
        let w = self.words.get(x)?.as_ref()?;
        let raw: Vec<BigInt> = w.iter().map(|&e| BigInt::from(e)).collect();
        Some(self.presented.reduce(&raw))
    }

    /// A word over `gens` representing `x`.
    pub fn word(&self, x: usize) -> Option<&[i64]> {
        self.words.get(x)?.as_deref()
    }

    pub fn contains(&self, x: usize) -> bool {
        matches!(self.words.get(x), Some(Some(_)))
    }
}

fn closure<F: Fn(usize, usize) -> usize>(
    universe: usize,
    identity: usize,
    gens: &[usize],
    op: &F,
) -> Vec<bool> {
    let mut seen = vec![false; universe];
    seen[identity] = true;
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = op(x, g);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

fn element_order<F: Fn(usize, usize) -> usize>(x: usize, identity: usize, op: &F) -> u64 {
    let mut k = 1;
    let mut y = x;
    while y != identity {
        y = op(y, x);
        k += 1;
    }
    k
}

/// Decompose the abelian group formed by `members` (a subset of
/// `0..universe` closed under `op`).
///
/// Generators are picked deterministically: repeatedly the element of
/// largest order outside the current span, smallest index first.
pub fn abelian_from_cayley<F: Fn(usize, usize) -> usize>(
    universe: usize,
    identity: usize,
    members: &[usize],
    op: F,
) -> Result<CayleyStructure> {
    let orders: Vec<(usize, u64)> = members
        .iter()
        .map(|&x| (x, element_order(x, identity, &op)))
        .collect();
    let mut gens = Vec::new();
    let mut span = closure(universe, identity, &gens, &op);
    loop {
        let next = orders
            .iter()
            .filter(|(x, _)| !span[*x])
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
        let Some(&(g, _)) = next else { break };
        gens.push(g);
        span = closure(universe, identity, &gens, &op);
    }
    let mut words: Vec<Option<Vec<i64>>> = vec![None; universe];
    words[identity] = Some(vec![0; gens.len()]);
    let mut queue = VecDeque::from([identity]);
    let mut rels: Vec<Vec<i64>> = Vec::new();
    while let Some(x) = queue.pop_front() {
        let wx = words[x].clone().expect("visited");
        for (i, &g) in gens.iter().enumerate() {
            let y = op(x, g);
            let mut w = wx.clone();
            w[i] += 1;
            match &words[y] {
                None => {
                    words[y] = Some(w);
                    queue.push_back(y);
                }
                Some(wy) => {
                    let r: Vec<i64> = w.iter().zip(wy).map(|(a, b)| a - b).collect();
                    if r.iter().any(|&c| c != 0) {
                        rels.push(r);
                    }
                }
            }
        }
    }
    let covered = words.iter().filter(|w| w.is_some()).count();
    if covered != members.len() {
        return Err(Error::internal(format!(
            "generated subgroup has {covered} elements, expected {}",
            members.len()
        )));
    }
    let mut m = IntMatrix::zeros(rels.len(), gens.len());
    for (r, row) in rels.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v != 0 {
                m.set(r, c, BigInt::from(v));
            }
        }
    }
    let presented = present(gens.len(), &m)?;
    let order = presented.group.order().unwrap_or_else(BigInt::zero);
    if order != BigInt::from(members.len()) {
        return Err(Error::internal(format!(
            "Cayley structure {} has the wrong order for {} elements",
            presented.group,
            members.len()
        )));
    }
    Ok(CayleyStructure {
        presented,
        gens,
        words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FinAbGroup;

    #[test]
    fn units_mod_fifteen() {
        let members: Vec<usize> = (1..15).filter(|x| num_integer::Integer::gcd(x, &15) == 1).collect();
        let s = abelian_from_cayley(15, 1, &members, |a, b| a * b % 15).unwrap();
        assert_eq!(s.presented.group, FinAbGroup::from_orders(&[2.into(), 4.into()]));
        assert_eq!(s.gens[0], 2);
        for &x in &members {
            assert!(s.log(x).is_some());
        }
        assert!(s.log(3).is_none());
    }

    #[test]
    fn additive_cyclic() {
        let members: Vec<usize> = (0..12).collect();
        let s = abelian_from_cayley(12, 0, &members, |a, b| (a + b) % 12).unwrap();
        assert_eq!(s.presented.group, FinAbGroup::cyclic(12));
        assert_eq!(s.gens, vec![1]);
    }
}
