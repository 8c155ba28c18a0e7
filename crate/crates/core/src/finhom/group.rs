use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};

use crate::abelian::{abelian_from_cayley, FinAbGroup};
use crate::error::{Error, Result};
use crate::rings::{FiniteRing, Mat2};

/// Groups up to this order keep a full multiplication table.
pub const TABLE_CUTOFF: usize = 2048;

/// Default cap on the order of groups built from matrices.
pub const DEFAULT_GROUP_CUTOFF: usize = 100_000;

/// Matrix representatives of a projective group.
#[derive(Clone)]
struct Projective {
    ring: FiniteRing,
    mats: Vec<Mat2>,
    index: HashMap<Mat2, u32>,
}

/// A finite group on elements `0..order`.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    identity: usize,
    generators: Vec<usize>,
    inv: Vec<u32>,
    table: Option<Vec<u32>>,
    matrices: Option<Box<Projective>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Build from a row-major multiplication table. Checks the axioms
    /// exhaustively up to order 256 and generation in all cases.
    pub fn from_table(name: &str, table: Vec<u32>, identity: usize, generators: Vec<usize>) -> Result<FiniteGroup> {
        let n = (table.len() as f64).sqrt().round() as usize;
        if n * n != table.len() || n == 0 {
            return Err(Error::invalid("multiplication table is not square"));
        }
        if identity >= n || table.iter().any(|&x| x as usize >= n) {
            return Err(Error::invalid("table entry out of range"));
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] as usize == identity {
                    inv[a] = b as u32;
                }
            }
        }
        if inv.contains(&u32::MAX) {
            return Err(Error::invalid("some element has no inverse"));
        }
        let g = FiniteGroup {
            name: name.to_string(),
            order: n,
            identity,
            generators,
            inv,
            table: Some(table),
            matrices: None,
        };
        g.verify()?;
        Ok(g)
    }

    /// A group given by elements and an operation, tabulated.
    fn tabulate(name: &str, n: usize, identity: usize, generators: Vec<usize>, op: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup> {
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = op(a, b) as u32;
            }
        }
        FiniteGroup::from_table(name, table, identity, generators)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = &self.table {
            return t[a * self.order + b] as usize;
        }
        let p = self.matrices.as_ref().expect("groups without a table carry matrices");
        p.index[&p.mats[a].mul(&p.ring, &p.mats[b]).projective_canonical(&p.ring)] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// Matrix representative, for groups built from matrices.
    pub fn matrix(&self, a: usize) -> Option<Mat2> {
        self.matrices.as_ref().map(|p| p.mats[a])
    }

    /// Element represented by a matrix, for groups built from matrices.
    pub fn element_of(&self, m: &Mat2) -> Option<usize> {
        let p = self.matrices.as_ref()?;
        p.index.get(&m.projective_canonical(&p.ring)).map(|&i| i as usize)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// Group axioms: associativity exhaustively up to order 256 (sampled on
    /// generators above), identity, inverses, and generation.
    pub fn verify(&self) -> Result<()> {
        let n = self.order;
        let id = self.identity;
        for a in 0..n {
            if self.mul(a, id) != a || self.mul(id, a) != a {
                return Err(Error::invalid(format!("{}: identity fails on {a}", self.name)));
            }
            if self.mul(a, self.inv(a)) != id {
                return Err(Error::invalid(format!("{}: inverse fails on {a}", self.name)));
            }
        }
        let triples: Box<dyn Iterator<Item = (usize, usize, usize)>> = if n <= 256 {
            Box::new((0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))))
        } else {
            let gens = self.generators.clone();
            Box::new((0..n).flat_map(move |a| {
                let gens = gens.clone();
                gens.clone().into_iter().flat_map(move |b| gens.clone().into_iter().map(move |c| (a, b, c)))
            }))
        };
        for (a, b, c) in triples {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::invalid(format!("{}: not associative at ({a}, {b}, {c})", self.name)));
            }
        }
        if self.closure(&self.generators).len() != n {
            return Err(Error::invalid(format!("{}: generators do not generate", self.name)));
        }
        Ok(())
    }

    /// Write the group as text: a header line `group <name> <order>
    /// <identity>`, a `generators` line, then one row of the multiplication
    /// table per line.
    pub fn dump(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "group {} {} {}", self.name, self.order, self.identity)?;
        let gens: Vec<String> = self.generators.iter().map(usize::to_string).collect();
        writeln!(out, "generators {}", gens.join(" "))?;
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            writeln!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }

    /// Read a group written by [`dump`](Self::dump).
    pub fn load(input: impl BufRead) -> Result<FiniteGroup> {
        let mut lines = input.lines();
        let mut next = || -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::Format("unexpected end of group dump".into()))?
                .map_err(Error::from)
        };
        let bad = |what: &str| Error::Format(format!("bad {what} in group dump"));
        let header = next()?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "group" {
            return Err(bad("header"));
        }
        let n: usize = h[2].parse().map_err(|_| bad("order"))?;
        let identity: usize = h[3].parse().map_err(|_| bad("identity"))?;
        let gline = next()?;
        let generators = gline
            .strip_prefix("generators")
            .ok_or_else(|| bad("generators line"))?
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad("generator")))
            .collect::<Result<Vec<usize>>>()?;
        let mut table = Vec::with_capacity(n * n);
        for _ in 0..n {
            let row = next()?;
            for x in row.split_whitespace() {
                table.push(x.parse().map_err(|_| bad("table entry"))?);
            }
        }
        FiniteGroup::from_table(h[1], table, identity, generators)
    }
}

/// The dihedral group of order `2n`: element `j n + i` is `r^i s^j`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::invalid("dihedral groups need n >= 1"));
    }
    let op = |x: usize, y: usize| {
        let (i, a) = (x % n, x / n);
        let (k, b) = (y % n, y / n);
        let rot = if a == 0 { (i + k) % n } else { (i + n - k) % n };
        ((a + b) % 2) * n + rot
    };
    let mut gens = vec![n];
    if n > 1 {
        gens.insert(0, 1);
    }
    FiniteGroup::tabulate(&format!("D{n}"), 2 * n, 0, gens, op)
}

/// `Z/d_1 x ... x Z/d_k` with mixed-radix element indices.
pub fn abelian_group(factors: &[u64]) -> Result<FiniteGroup> {
    if factors.contains(&0) {
        return Err(Error::invalid("factors must be positive"));
    }
    let n: usize = factors.iter().map(|&d| d as usize).product();
    let split = |mut x: usize| -> Vec<usize> {
        factors
            .iter()
            .rev()
            .map(|&d| {
                let r = x % d as usize;
                x /= d as usize;
                r
            })
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect()
    };
    let join = |v: &[usize]| v.iter().zip(factors).fold(0, |acc, (&x, &d)| acc * d as usize + x);
    let op = |a: usize, b: usize| {
        let (x, y) = (split(a), split(b));
        let s: Vec<usize> = x.iter().zip(&y).zip(factors).map(|((p, q), &d)| (p + q) % d as usize).collect();
        join(&s)
    };
    let gens: Vec<usize> = (0..factors.len())
        .filter(|&i| factors[i] > 1)
        .map(|i| {
            let mut v = vec![0; factors.len()];
            v[i] = 1;
            join(&v)
        })
        .collect();
    let name = if factors.is_empty() {
        "1".to_string()
    } else {
        factors.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join("x")
    };
    FiniteGroup::tabulate(&name, n, 0, gens, op)
}

fn projective_group(
    r: &FiniteRing,
    name: String,
    keep: impl Fn(&Mat2) -> bool,
    gens: Vec<Mat2>,
    cutoff: usize,
) -> Result<FiniteGroup> {
    let mut mats = Vec::new();
    for a in r.elements() {
        for b in r.elements() {
            for c in r.elements() {
                for d in r.elements() {
                    let m = Mat2::new(a, b, c, d);
                    if m.is_invertible(r) && keep(&m) && m.projective_canonical(r) == m {
                        mats.push(m);
                    }
                }
            }
        }
    }
    if mats.len() > cutoff {
        return Err(Error::Budget(format!(
            "{name} has order {} above the cutoff {cutoff}",
            mats.len()
        )));
    }
    let index: HashMap<Mat2, u32> = mats.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
    let canon = |m: &Mat2| index[&m.projective_canonical(r)] as usize;
    let mut generators: Vec<usize> = gens.iter().map(canon).collect();
    generators.sort_unstable();
    generators.dedup();
    let identity = canon(&Mat2::identity(r));
    generators.retain(|&g| g != identity);
    let inv: Vec<u32> = mats
        .iter()
        .map(|m| canon(&m.inverse(r).expect("invertible")) as u32)
        .collect();
    let order = mats.len();
    let mut g = FiniteGroup {
        name,
        order,
        identity,
        generators,
        inv,
        table: None,
        matrices: Some(Box::new(Projective {
            ring: r.clone(),
            mats,
            index,
        })),
    };
    if order <= TABLE_CUTOFF {
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = g.mul(a, b) as u32;
            }
        }
        g.table = Some(table);
    }
    if g.closure(&g.generators).len() != order {
        return Err(Error::internal(format!("{}: generators do not generate", g.name)));
    }
    Ok(g)
}

fn additive_generators(r: &FiniteRing) -> Vec<usize> {
    let add = r.additive_structure();
    let mut gens: Vec<usize> = add.gens.clone();
    gens.retain(|&x| x != 0);
    gens
}

fn unit_generators(r: &FiniteRing) -> Vec<usize> {
    r.unit_group().gens().to_vec()
}

fn elementary_generators(r: &FiniteRing) -> Vec<Mat2> {
    let mut gens = Vec::new();
    for x in additive_generators(r) {
        gens.push(Mat2::e12(r, x));
        gens.push(Mat2::e21(r, x));
    }
    gens
}

/// `PGL_2(A) = GL_2(A) / A^x`, generated by elementary and diagonal matrices.
pub fn pgl2(r: &FiniteRing) -> Result<FiniteGroup> {
    pgl2_with(r, DEFAULT_GROUP_CUTOFF)
}

pub fn pgl2_with(r: &FiniteRing, cutoff: usize) -> Result<FiniteGroup> {
    let mut gens = elementary_generators(r);
    gens.extend(unit_generators(r).into_iter().map(|u| Mat2::diag(u, r.one())));
    projective_group(r, format!("PGL2({})", r.spec_string()), |_| true, gens, cutoff)
}

/// Image of `SL_2(A)`: classes whose determinant is a square unit.
pub fn psl2(r: &FiniteRing) -> Result<FiniteGroup> {
    let squares: Vec<usize> = r.units().iter().map(|&u| r.mul(u, u)).collect();
    let mut gens = elementary_generators(r);
    gens.extend(r.units().iter().map(|&u| Mat2::diag(u, r.inv(u).expect("unit"))));
    projective_group(
        r,
        format!("PSL2({})", r.spec_string()),
        |m| squares.contains(&m.det(r)),
        gens,
        DEFAULT_GROUP_CUTOFF,
    )
}

/// Upper triangular classes, the stabilizer of `inf`.
pub fn pb2(r: &FiniteRing) -> Result<FiniteGroup> {
    let mut gens: Vec<Mat2> = additive_generators(r).into_iter().map(|x| Mat2::e12(r, x)).collect();
    gens.extend(unit_generators(r).into_iter().map(|u| Mat2::diag(u, r.one())));
    projective_group(r, format!("PB2({})", r.spec_string()), |m| m.c == 0, gens, DEFAULT_GROUP_CUTOFF)
}

/// Diagonal classes, identified with `A^x` through `diag(a, 1)`.
pub fn pt2(r: &FiniteRing) -> Result<FiniteGroup> {
    let gens = unit_generators(r).into_iter().map(|u| Mat2::diag(u, r.one())).collect();
    projective_group(
        r,
        format!("PT2({})", r.spec_string()),
        |m| m.b == 0 && m.c == 0,
        gens,
        DEFAULT_GROUP_CUTOFF,
    )
}

/// A homomorphism given by the images of all source elements.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source_order: usize,
    target_order: usize,
    images: Vec<usize>,
}

impl GroupHom {
    /// Checks multiplicativity on all pairs (generators times elements for
    /// large sources).
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<GroupHom> {
        if images.len() != source.order() || images.iter().any(|&x| x >= target.order()) {
            return Err(Error::invalid("image list does not match the groups"));
        }
        if images[source.identity()] != target.identity() {
            return Err(Error::invalid("identity is not preserved"));
        }
        let seconds: Vec<usize> = if source.order() <= 256 {
            (0..source.order()).collect()
        } else {
            source.generators().to_vec()
        };
        for a in 0..source.order() {
            for &b in &seconds {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::invalid(format!("not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(GroupHom {
            source_order: source.order(),
            target_order: target.order(),
            images,
        })
    }

    /// Extend images of the source generators along a breadth-first search.
    pub fn from_generators(source: &FiniteGroup, target: &FiniteGroup, gen_images: &[usize]) -> Result<GroupHom> {
        if gen_images.len() != source.generators().len() {
            return Err(Error::invalid("one image per generator is required"));
        }
        let mut images = vec![usize::MAX; source.order()];
        images[source.identity()] = target.identity();
        let mut queue = VecDeque::from([source.identity()]);
        while let Some(x) = queue.pop_front() {
            for (&g, &h) in source.generators().iter().zip(gen_images) {
                let y = source.mul(x, g);
                let img = target.mul(images[x], h);
                if images[y] == usize::MAX {
                    images[y] = img;
                    queue.push_back(y);
                } else if images[y] != img {
                    return Err(Error::invalid("generator images do not define a homomorphism"));
                }
            }
        }
        GroupHom::new(source, target, images)
    }

    /// Inclusion of one matrix group in another over the same ring.
    pub fn inclusion(sub: &FiniteGroup, sup: &FiniteGroup) -> Result<GroupHom> {
        let images = (0..sub.order())
            .map(|a| {
                let m = sub.matrix(a).ok_or_else(|| Error::invalid(format!("{} is not a matrix group", sub.name())))?;
                sup.element_of(&m)
                    .ok_or_else(|| Error::invalid(format!("{} is not contained in {}", sub.name(), sup.name())))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(sub, sup, images)
    }

    pub fn trivial(source: &FiniteGroup, target: &FiniteGroup) -> GroupHom {
        GroupHom {
            source_order: source.order(),
            target_order: target.order(),
            images: vec![target.identity(); source.order()],
        }
    }

    pub fn identity(g: &FiniteGroup) -> GroupHom {
        GroupHom {
            source_order: g.order(),
            target_order: g.order(),
            images: (0..g.order()).collect(),
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub(crate) fn check_groups(&self, source: &FiniteGroup, target: &FiniteGroup) -> Result<()> {
        if source.order() != self.source_order || target.order() != self.target_order {
            return Err(Error::invalid("homomorphism used with groups of the wrong order"));
        }
        Ok(())
    }
}

/// `G / [G, G]`. The derived subgroup is the normal closure of the
/// commutators of generators.
pub fn abelianization(g: &FiniteGroup) -> Result<FinAbGroup> {
    let gens = g.generators();
    let mut seeds: Vec<usize> = Vec::new();
    for &a in gens {
        for &b in gens {
            let c = g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b)));
            if c != g.identity() && !seeds.contains(&c) {
                seeds.push(c);
            }
        }
    }
    let mut in_derived = vec![false; g.order()];
    in_derived[g.identity()] = true;
    let mut members = vec![g.identity()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in &seeds {
        if !in_derived[s] {
            in_derived[s] = true;
            members.push(s);
            queue.push_back(s);
        }
    }
    // close under products with the seeds and conjugation by generators
    while let Some(x) = queue.pop_front() {
        let conj = gens.iter().map(|&h| g.mul(g.mul(h, x), g.inv(h)));
        let prods = seeds.iter().map(|&s| g.mul(x, s));
        let next: Vec<usize> = conj.chain(prods).collect();
        for y in next {
            if !in_derived[y] {
                in_derived[y] = true;
                members.push(y);
                queue.push_back(y);
            }
        }
    }
    let mut coset = vec![u32::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset[x] != u32::MAX {
            continue;
        }
        for &m in &members {
            coset[g.mul(x, m)] = reps.len() as u32;
        }
        reps.push(x);
    }
    let k = reps.len();
    let all: Vec<usize> = (0..k).collect();
    let id = coset[g.identity()] as usize;
    let s = abelian_from_cayley(k, id, &all, |a, b| coset[g.mul(reps[a], reps[b])] as usize)?;
    Ok(s.presented.group)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let f5 = FiniteRing::parse("gf:5^1").unwrap();
        assert_eq!(pgl2(&f5).unwrap().order(), 120);
        assert_eq!(pb2(&f5).unwrap().order(), 20);
        assert_eq!(pt2(&f5).unwrap().order(), 4);
        assert_eq!(psl2(&f5).unwrap().order(), 60);
        let z4 = FiniteRing::parse("zmod:4").unwrap();
        assert_eq!(pgl2(&z4).unwrap().order(), 48);
    }

    #[test]
    fn gl2_z4_by_enumeration() {
        let r = FiniteRing::parse("zmod:4").unwrap();
        let mut count = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        count += Mat2::new(a, b, c, d).is_invertible(&r) as usize;
                    }
                }
            }
        }
        assert_eq!(count, 96);
    }

    #[test]
    fn dihedral_groups() {
        let d1 = dihedral(1).unwrap();
        assert_eq!(d1.order(), 2);
        assert!(d1.is_abelian());
        let d2 = dihedral(2).unwrap();
        assert!(d2.is_abelian());
        assert!((0..4).all(|x| d2.element_order(x) <= 2));
        let d3 = dihedral(3).unwrap();
        assert!(!d3.is_abelian());
        assert_eq!(abelianization(&d3).unwrap(), FinAbGroup::cyclic(2));
    }

    #[test]
    fn abelianizations() {
        let f5 = FiniteRing::parse("gf:5^1").unwrap();
        assert_eq!(abelianization(&pgl2(&f5).unwrap()).unwrap(), FinAbGroup::cyclic(2));
        assert!(abelianization(&psl2(&f5).unwrap()).unwrap().is_trivial());
        let z4 = FiniteRing::parse("zmod:4").unwrap();
        assert_eq!(abelianization(&pgl2(&z4).unwrap()).unwrap().to_strings(), ["2", "2"]);
        let g = abelian_group(&[2, 6]).unwrap();
        assert_eq!(abelianization(&g).unwrap().to_strings(), ["2", "6"]);
    }

    #[test]
    fn large_groups_multiply_on_demand() {
        let r = FiniteRing::parse("zmod:25").unwrap();
        let g = pgl2(&r).unwrap();
        assert_eq!(g.order(), 15000);
        assert!(!g.has_table());
        assert_eq!(g.mul(g.generators()[0], g.inv(g.generators()[0])), g.identity());
    }

    #[test]
    fn dump_round_trip() {
        let g = dihedral(4).unwrap();
        let mut buf = Vec::new();
        g.dump(&mut buf).unwrap();
        let h = FiniteGroup::load(&buf[..]).unwrap();
        assert_eq!(h.order(), 8);
        assert!((0..8).all(|a| (0..8).all(|b| h.mul(a, b) == g.mul(a, b))));
    }

    #[test]
    fn homomorphisms() {
        let d1 = dihedral(1).unwrap();
        let d3 = dihedral(3).unwrap();
        let inc = GroupHom::from_generators(&d1, &d3, &[3]).unwrap();
        assert_eq!(inc.images(), &[0, 3]);
        assert!(GroupHom::from_generators(&d1, &d3, &[1]).is_err());
        let f5 = FiniteRing::parse("gf:5^1").unwrap();
        let (t, b, g) = (pt2(&f5).unwrap(), pb2(&f5).unwrap(), pgl2(&f5).unwrap());
        let inc = GroupHom::inclusion(&t, &b).unwrap();
        let mut img = inc.images().to_vec();
        img.sort_unstable();
        img.dedup();
        assert_eq!(img.len(), 4);
        assert!(GroupHom::inclusion(&b, &g).is_ok());
        assert!(GroupHom::inclusion(&g, &b).is_err());
    }
}
