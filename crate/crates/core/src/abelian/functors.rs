//! Tensor, Tor and the low exterior/symmetric powers of finitely generated
//! abelian groups, computed from explicit presentations on generator
//! pairs and triples.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::group::{fp_group, present, FinAbGroup, Presented};
use super::int::gcd;
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

fn require_finite(g: &FinAbGroup, what: &str) -> Result<()> {
    if g.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} requires a finite group, got {g}")))
    }
}

/// A bilinear construction on canonical generators, `G x H -> F`, with
/// coordinates for the images of pairs of elements.
#[derive(Clone, Debug)]
pub struct Bilinear {
    presented: Presented,
    left: usize,
    right: usize,
}

impl Bilinear {
    pub fn group(&self) -> &FinAbGroup {
        &self.presented.group
    }

    pub fn presented(&self) -> &Presented {
        &self.presented
    }

    /// Coordinates of the image of `(x, y)`.
    pub fn apply(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.left);
        assert_eq!(y.len(), self.right);
        let mut raw = Vec::new();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    raw.push((i * self.right + j, a * b));
                }
            }
        }
        self.presented.reduce_sparse(&raw)
    }
}

struct Relations {
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl Relations {
    fn new() -> Self {
        Relations { rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<(usize, BigInt)>) {
        if row.iter().any(|(_, c)| !c.is_zero()) {
            self.rows.push(row);
        }
    }

    fn matrix(&self, cols: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows.len(), cols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                m.add_to(r, *c, v);
            }
        }
        m
    }
}

fn bilinear_relations(g: &FinAbGroup, h: &FinAbGroup) -> Relations {
    let (n, m) = (g.ngens(), h.ngens());
    let mut rel = Relations::new();
    for i in 0..n {
        for j in 0..m {
            let d = gcd(&g.factors()[i], &h.factors()[j]);
            if !d.is_zero() {
                rel.push(vec![(i * m + j, d)]);
            }
        }
    }
    rel
}

/// `G (x) H` with the bilinear map `(x, y) -> x (x) y`.
pub fn tensor_presented(g: &FinAbGroup, h: &FinAbGroup) -> Result<Bilinear> {
    let rel = bilinear_relations(g, h);
    let cols = g.ngens() * h.ngens();
    Ok(Bilinear {
        presented: present(cols, &rel.matrix(cols))?,
        left: g.ngens(),
        right: h.ngens(),
    })
}

pub fn tensor(g: &FinAbGroup, h: &FinAbGroup) -> FinAbGroup {
    let mut orders = Vec::new();
    for a in g.factors() {
        for b in h.factors() {
            orders.push(gcd(a, b));
        }
    }
    FinAbGroup::from_orders(&orders)
}

/// `Tor(G, H)` for finite groups.
pub fn tor(g: &FinAbGroup, h: &FinAbGroup) -> Result<FinAbGroup> {
    require_finite(g, "tor")?;
    require_finite(h, "tor")?;
    Ok(tor_any(g, h))
}

/// `Tor(G, H)` allowing free summands, which contribute nothing.
pub(crate) fn tor_any(g: &FinAbGroup, h: &FinAbGroup) -> FinAbGroup {
    let mut orders = Vec::new();
    for a in g.factors().iter().filter(|a| !a.is_zero()) {
        for b in h.factors().iter().filter(|b| !b.is_zero()) {
            orders.push(gcd(a, b));
        }
    }
    FinAbGroup::from_orders(&orders)
}

fn square_presented(g: &FinAbGroup, alternating: bool) -> Result<Bilinear> {
    let n = g.ngens();
    let mut rel = bilinear_relations(g, g);
    for i in 0..n {
        if alternating {
            rel.push(vec![(i * n + i, BigInt::one())]);
        }
        for j in i..n {
            // i == j gives 2 (g_i (x) g_i), which the alternating case implies
            if i != j || !alternating {
                rel.push(vec![(i * n + j, BigInt::one()), (j * n + i, BigInt::one())]);
            }
        }
    }
    let cols = n * n;
    Ok(Bilinear {
        presented: present(cols, &rel.matrix(cols))?,
        left: n,
        right: n,
    })
}

/// `G (x) G / <a (x) b + b (x) a>`, with `(x, y) -> x (x) y`.
///
/// The relation carries a plus sign, so `2 (a (x) a) = 0`:
///
/// ```
/// use scissors::abelian::{sym_square, FinAbGroup};
/// assert_eq!(sym_square(&FinAbGroup::cyclic(4)).unwrap(), FinAbGroup::cyclic(2));
/// ```
pub fn sym_square_presented(g: &FinAbGroup) -> Result<Bilinear> {
    require_finite(g, "sym_square")?;
    square_presented(g, false)
}

pub fn sym_square(g: &FinAbGroup) -> Result<FinAbGroup> {
    Ok(sym_square_presented(g)?.presented.group)
}

/// `Lambda^2 G` with `(x, y) -> x ^ y`.
pub fn exterior_square_presented(g: &FinAbGroup) -> Result<Bilinear> {
    require_finite(g, "exterior_square")?;
    square_presented(g, true)
}

pub fn exterior_square(g: &FinAbGroup) -> Result<FinAbGroup> {
    Ok(exterior_square_presented(g)?.presented.group)
}

/// `Lambda^3 G` from the presentation on all ordered generator triples.
pub fn exterior_cube(g: &FinAbGroup) -> Result<FinAbGroup> {
    require_finite(g, "exterior_cube")?;
    let n = g.ngens();
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut rel = Relations::new();
    let one = BigInt::one;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let e = idx(a, b, c);
                for slot in [a, b, c] {
                    rel.push(vec![(e, g.factors()[slot].clone())]);
                }
                if a == b || b == c {
                    rel.push(vec![(e, one())]);
                }
                rel.push(vec![(e, one()), (idx(b, a, c), one())]);
                rel.push(vec![(e, one()), (idx(a, c, b), one())]);
            }
        }
    }
    let cols = n * n * n;
    fp_group(cols, &rel.matrix(cols))
}

/// The extension of a cyclic `G` by `mu_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorTilde {
    pub group: FinAbGroup,
    /// Only the split extension exists (`|G|` odd and `mu_2` of order two).
    pub split_only: bool,
}

/// The nontrivial extension of a finite cyclic `G` by a group of order
/// `mu2_order`.
///
/// ```
/// use scissors::abelian::{tor_tilde, FinAbGroup};
/// let t = tor_tilde(&FinAbGroup::cyclic(4), 2).unwrap();
/// assert_eq!(t.group, FinAbGroup::cyclic(8));
/// assert!(!t.split_only);
/// ```
pub fn tor_tilde(g: &FinAbGroup, mu2_order: u32) -> Result<TorTilde> {
    require_finite(g, "tor_tilde")?;
    if !g.is_cyclic() {
        return Err(Error::invalid(format!(
            "tor_tilde is only defined here for cyclic groups, got {g}"
        )));
    }
    let order = g.order().expect("finite");
    match mu2_order {
        1 => Ok(TorTilde {
            group: g.clone(),
            split_only: false,
        }),
        2 if (&order % 2u32).is_zero() => Ok(TorTilde {
            group: FinAbGroup::from_orders(&[order * 2u32]),
            split_only: false,
        }),
        2 => Ok(TorTilde {
            group: g.direct_sum(&FinAbGroup::cyclic(2)),
            split_only: true,
        }),
        other => Err(Error::invalid(format!("mu_2 order must be 1 or 2, got {other}"))),
    }
}

fn cyclic_homology(d: &BigInt, n: usize) -> FinAbGroup {
    match n {
        0 => FinAbGroup::integers(),
        _ if d.is_zero() => {
            if n == 1 {
                FinAbGroup::integers()
            } else {
                FinAbGroup::trivial()
            }
        }
        _ if n % 2 == 1 => FinAbGroup::from_orders(std::slice::from_ref(d)),
        _ => FinAbGroup::trivial(),
    }
}

/// Integral homology `H_n(G)` for `n <= 3`, by Kunneth over the cyclic
/// decomposition.
///
/// ```
/// use scissors::abelian::{homology_abelian, FinAbGroup};
/// let v4 = FinAbGroup::from_orders(&[2.into(), 2.into()]);
/// assert_eq!(homology_abelian(&v4, 3).unwrap().to_strings(), ["2", "2", "2"]);
/// ```
pub fn homology_abelian(g: &FinAbGroup, n: usize) -> Result<FinAbGroup> {
    if n > 3 {
        return Err(Error::invalid(format!("degree {n} is above the supported range 0..=3")));
    }
    let mut h: Vec<FinAbGroup> = (0..=n).map(|k| cyclic_homology(&BigInt::one(), k)).collect();
    h[1..].iter_mut().for_each(|x| *x = FinAbGroup::trivial());
    for d in g.factors() {
        let c: Vec<FinAbGroup> = (0..=n).map(|k| cyclic_homology(d, k)).collect();
        let next = (0..=n)
            .map(|k| {
                let mut acc = FinAbGroup::trivial();
                for i in 0..=k {
                    acc = acc.direct_sum(&tensor(&h[i], &c[k - i]));
                }
                for i in 0..k {
                    acc = acc.direct_sum(&tor_any(&h[i], &c[k - 1 - i]));
                }
                acc
            })
            .collect();
        h = next;
    }
    Ok(h.swap_remove(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> FinAbGroup {
        FinAbGroup::from_orders(&f.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn exterior_square_of_klein_four() {
        assert_eq!(exterior_square(&g(&[2, 2])).unwrap(), g(&[2]));
        assert_eq!(exterior_square(&g(&[7])).unwrap(), g(&[]));
        assert_eq!(exterior_square(&g(&[2, 4, 8])).unwrap(), g(&[2, 2, 4]));
    }

    #[test]
    fn exterior_cube_examples() {
        assert!(exterior_cube(&g(&[2, 2])).unwrap().is_trivial());
        assert_eq!(exterior_cube(&g(&[2, 2, 2])).unwrap(), g(&[2]));
        assert_eq!(exterior_cube(&g(&[2, 4, 4])).unwrap(), g(&[2]));
    }

    #[test]
    fn small_functor_values() {
        assert_eq!(tor(&g(&[4]), &g(&[6])).unwrap(), g(&[2]));
        assert_eq!(sym_square(&g(&[4])).unwrap(), g(&[2]));
        assert_eq!(sym_square(&g(&[3])).unwrap(), g(&[]));
        assert_eq!(tensor(&g(&[4]), &FinAbGroup::integers()), g(&[4]));
        assert!(tor(&FinAbGroup::integers(), &g(&[2])).is_err());
    }

    #[test]
    fn tor_tilde_cases() {
        assert_eq!(tor_tilde(&g(&[6]), 1).unwrap().group, g(&[6]));
        let t = tor_tilde(&g(&[3]), 2).unwrap();
        assert_eq!(t.group, g(&[6]));
        assert!(t.split_only);
        assert!(tor_tilde(&g(&[2, 2]), 2).is_err());
    }

    #[test]
    fn cyclic_homology_pattern() {
        for m in [2u64, 5, 12] {
            assert_eq!(homology_abelian(&g(&[m]), 0).unwrap(), FinAbGroup::integers());
            assert_eq!(homology_abelian(&g(&[m]), 1).unwrap(), g(&[m]));
            assert!(homology_abelian(&g(&[m]), 2).unwrap().is_trivial());
            assert_eq!(homology_abelian(&g(&[m]), 3).unwrap(), g(&[m]));
        }
        assert!(homology_abelian(&g(&[2]), 4).is_err());
    }

    #[test]
    fn bilinear_coordinates() {
        let s = sym_square_presented(&g(&[4])).unwrap();
        let x = vec![BigInt::from(1)];
        let y = vec![BigInt::from(2)];
        // g (x) 2g = 2 (g (x) g) = 0 in Z/2
        assert!(s.group().is_zero_element(&s.apply(&x, &y)));
        assert!(!s.group().is_zero_element(&s.apply(&x, &x)));
    }

    proptest::proptest! {
        #[test]
        fn h2_is_exterior_square(a in 1u64..9, b in 1u64..9) {
            let grp = g(&[a, b]);
            proptest::prop_assert_eq!(
                homology_abelian(&grp, 2).unwrap(),
                exterior_square(&grp).unwrap()
            );
        }

        #[test]
        fn h3_contains_exterior_cube_and_tor(a in 1u64..7, b in 1u64..7, c in 1u64..5) {
            // Lambda^3 G injects into H_3(G)
            let grp = g(&[a, b, c]);
            let h3 = homology_abelian(&grp, 3).unwrap().order().unwrap();
            let l3 = exterior_cube(&grp).unwrap().order().unwrap();
            proptest::prop_assert!((&h3 % &l3).is_zero());
        }
    }
}
