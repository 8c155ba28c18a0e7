use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;

use super::projline::{ge2_classes, ProjLine};
use crate::abelian::{fp_group, FinAbGroup, IntMatrix};
use crate::error::Result;
use crate::rings::FiniteRing;

/// `H_1` of the clique complex on the GE_2 classes, computed as the
/// abelianized fundamental group of its 2-skeleton.
///
/// Generators are the edges outside a breadth-first spanning tree rooted at
/// `<e1>`; every triangle contributes one relation.
pub fn h1_via_pi1(r: &FiniteRing, line: &ProjLine) -> Result<FinAbGroup> {
    let verts = ge2_classes(r, line);
    let mut in_set = vec![false; line.len()];
    for &v in &verts {
        in_set[v] = true;
    }
    let root = line.infinity(r);
    let mut parent = vec![usize::MAX; line.len()];
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in line.neighbors(v) {
            if in_set[w] && parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let is_tree = |a: usize, b: usize| parent[b] == a && b != root || parent[a] == b && a != root;
    let mut edge_gen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &a in &verts {
        for b in line.neighbors(a) {
            if a < b && in_set[b] && !is_tree(a, b) {
                let next = edge_gen.len();
                edge_gen.insert((a, b), next);
            }
        }
    }
    let mut rels = Vec::new();
    for (i, &a) in verts.iter().enumerate() {
        for (j, &b) in verts.iter().enumerate().skip(i + 1) {
            if !line.generic(a, b) {
                continue;
            }
            for &c in &verts[j + 1..] {
                if line.generic(a, c) && line.generic(b, c) {
                    rels.push([((a, b), 1), ((b, c), 1), ((a, c), -1)]);
                }
            }
        }
    }
    let mut m = IntMatrix::zeros(rels.len(), edge_gen.len());
    for (row, rel) in rels.iter().enumerate() {
        for &(e, s) in rel {
            if let Some(&g) = edge_gen.get(&e) {
                m.add_to(row, g, &BigInt::from(s));
            }
        }
    }
    fp_group(edge_gen.len(), &m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::chain::{build_complex, Variant};
    use crate::complexes::homology::complex_homology;
    use crate::complexes::projline::projective_line;

    #[test]
    fn agrees_with_chain_homology() {
        for s in ["gf:5^1", "gf:2^1", "gf:3^1", "zmod:4", "zmod:6", "prod:zmod:2+zmod:2", "zmod:9"] {
            let r = FiniteRing::parse(s).unwrap();
            let line = projective_line(&r);
            let c = build_complex(&r, 2, Variant::Ge2, true).unwrap();
            assert_eq!(h1_via_pi1(&r, &line).unwrap(), complex_homology(&c, 1).unwrap(), "{s}");
        }
    }
}
