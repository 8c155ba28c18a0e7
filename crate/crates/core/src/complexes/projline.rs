use std::collections::VecDeque;

use crate::rings::{FiniteRing, Mat2};

const NO_CLASS: u32 = u32::MAX;

/// Unimodular vectors of `A^2` modulo unit scaling.
///
/// Classes are ordered by their representative, the lexicographically
/// smallest `(u1, u2)` in the unit orbit.
#[derive(Clone, Debug)]
pub struct ProjLine {
    n: usize,
    reps: Vec<(usize, usize)>,
    class_of: Vec<u32>,
    generic: Vec<Vec<u64>>,
    spec: String,
}

fn is_unimodular(r: &FiniteRing, u1: usize, u2: usize) -> bool {
    let mut m1: Vec<usize> = r.elements().map(|x| r.mul(x, u1)).collect();
    m1.sort_unstable();
    m1.dedup();
    let mut m2: Vec<usize> = r.elements().map(|y| r.mul(y, u2)).collect();
    m2.sort_unstable();
    m2.dedup();
    m1.iter().any(|&a| m2.iter().any(|&b| r.add(a, b) == r.one()))
}

/// All unit classes of unimodular column vectors over `r`.
pub fn projective_line(r: &FiniteRing) -> ProjLine {
    let n = r.order();
    let mut class_of = vec![NO_CLASS; n * n];
    let mut reps = Vec::new();
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for u1 in 0..n {
        for u2 in 0..n {
            if class_of[u1 * n + u2] != NO_CLASS || !is_unimodular(r, u1, u2) {
                continue;
            }
            let orbit: Vec<usize> = r
                .units()
                .iter()
                .map(|&l| r.mul(l, u1) * n + r.mul(l, u2))
                .collect();
            // the first visit in lexicographic order is the smallest element
            for &v in &orbit {
                class_of[v] = reps.len() as u32;
            }
            reps.push((u1, u2));
            orbits.push(orbit);
        }
    }
    let c = reps.len();
    let words = c.div_ceil(64);
    let mut generic = vec![vec![0u64; words]; c];
    for i in 0..c {
        for j in 0..c {
            let (a, b) = (reps[i], reps[j]);
            let det = r.sub(r.mul(a.0, b.1), r.mul(a.1, b.0));
            if r.is_unit(det) {
                generic[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    ProjLine {
        n,
        reps,
        class_of,
        generic,
        spec: r.spec_string(),
    }
}

impl ProjLine {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn ring_spec(&self) -> &str {
        &self.spec
    }

    pub fn representative(&self, class: usize) -> (usize, usize) {
        self.reps[class]
    }

    pub fn class_of(&self, v: (usize, usize)) -> Option<usize> {
        match self.class_of[v.0 * self.n + v.1] {
            NO_CLASS => None,
            c => Some(c as usize),
        }
    }

    /// `det(u, v)` is a unit.
    pub fn generic(&self, i: usize, j: usize) -> bool {
        self.generic[i][j / 64] >> (j % 64) & 1 == 1
    }

    /// Bitset of classes generic to `i`.
    pub(crate) fn neighbor_bits(&self, i: usize) -> &[u64] {
        &self.generic[i]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.generic(i, j))
    }

    /// `<e1>`.
    pub fn infinity(&self, r: &FiniteRing) -> usize {
        self.class_of((r.one(), 0)).expect("e1 is unimodular")
    }

    /// `<e2>`.
    pub fn zero(&self, r: &FiniteRing) -> usize {
        self.class_of((0, r.one())).expect("e2 is unimodular")
    }

    /// `<e1 + a e2>` for a unit `a`.
    pub fn point(&self, r: &FiniteRing, a: usize) -> Option<usize> {
        r.is_unit(a).then(|| self.class_of((r.one(), a)).expect("unimodular"))
    }

    /// The unit `a` with `class == <e1 + a e2>`, if there is one.
    pub fn affine(&self, r: &FiniteRing, class: usize) -> Option<usize> {
        let (u1, u2) = self.reps[class];
        let a = r.div(u2, u1)?;
        r.is_unit(a).then_some(a)
    }

    /// Image of a class under a matrix.
    pub fn act(&self, r: &FiniteRing, g: &Mat2, class: usize) -> usize {
        self.class_of(g.apply(r, self.reps[class]))
            .expect("invertible matrices preserve unimodularity")
    }

    /// Human-readable name: `inf`, `0`, a unit label, or the representative.
    pub fn class_label(&self, r: &FiniteRing, class: usize) -> String {
        if class == self.infinity(r) {
            "inf".into()
        } else if class == self.zero(r) {
            "0".into()
        } else if let Some(a) = self.affine(r, class) {
            r.label(a).to_string()
        } else {
            let (u1, u2) = self.reps[class];
            format!("<{},{}>", r.label(u1), r.label(u2))
        }
    }
}

/// Classes in the orbit of `<e1>` under the group generated by elementary
/// and diagonal matrices, sorted.
pub fn ge2_classes(r: &FiniteRing, line: &ProjLine) -> Vec<usize> {
    let mut gens: Vec<Mat2> = Vec::new();
    for x in r.elements() {
        gens.push(Mat2::e12(r, x));
        gens.push(Mat2::e21(r, x));
    }
    for &u in r.units() {
        gens.push(Mat2::diag(u, r.one()));
        gens.push(Mat2::diag(r.one(), u));
    }
    let start = line.infinity(r);
    let mut seen = vec![false; line.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for g in &gens {
            let d = line.act(r, g, c);
            if !seen[d] {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    (0..line.len()).filter(|&c| seen[c]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(s: &str) -> (FiniteRing, ProjLine) {
        let r = FiniteRing::parse(s).unwrap();
        let l = projective_line(&r);
        (r, l)
    }

    #[test]
    fn class_counts() {
        assert_eq!(line("gf:5^1").1.len(), 6);
        assert_eq!(line("zmod:6").1.len(), 12);
        assert_eq!(line("zmod:4").1.len(), 6);
        assert_eq!(line("zmod:25").1.len(), 30);
        assert_eq!(line("gf:3^2").1.len(), 10);
    }

    #[test]
    fn named_points() {
        let (r, l) = line("gf:5^1");
        assert_eq!(l.representative(l.infinity(&r)), (1, 0));
        assert_eq!(l.representative(l.zero(&r)), (0, 1));
        let one = l.point(&r, 1).unwrap();
        assert!(l.generic(one, l.infinity(&r)) && l.generic(one, l.zero(&r)));
        assert!(!l.generic(one, one));
        assert_eq!(l.affine(&r, l.point(&r, 3).unwrap()), Some(3));
        assert_eq!(l.class_label(&r, l.infinity(&r)), "inf");
    }

    #[test]
    fn unimodular_iff_completable() {
        let (r, l) = line("zmod:12");
        for u1 in r.elements() {
            for u2 in r.elements() {
                let completable = r.elements().any(|w1| {
                    r.elements()
                        .any(|w2| r.is_unit(r.sub(r.mul(u1, w2), r.mul(u2, w1))))
                });
                assert_eq!(l.class_of((u1, u2)).is_some(), completable);
            }
        }
    }

    #[test]
    fn semilocal_rings_are_ge2() {
        for s in ["gf:7^1", "zmod:6", "prod:zmod:2+zmod:2", "zmod:8", "dual:gf:3^1"] {
            let (r, l) = line(s);
            assert_eq!(ge2_classes(&r, &l), (0..l.len()).collect::<Vec<_>>(), "{s}");
        }
    }
}
