//! Finite commutative rings as lookup tables.
//!
//! Elements are indices `0..order`; index `0` is always zero. Every
//! constructor goes through [`FiniteRing::from_tables`], which derives
//! negation, inverses, units and the characteristic from the two tables.
//!
//! ```
//! use scissors::rings::FiniteRing;
//! let r = FiniteRing::parse("zmod:8").unwrap();
//! assert_eq!(r.units(), &[1, 3, 5, 7]);
//! assert_eq!(r.unit_group().group().to_strings(), ["2", "2"]);
//! ```

mod galois;
mod invariants;
mod mat2;
mod spec;

use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::CayleyStructure;
use crate::error::{Error, Result};

pub use invariants::{LocalFactor, UnitGroupData};
pub use mat2::Mat2;
pub use spec::RingSpec;

/// Default maximal ring order.
pub const DEFAULT_CUTOFF: usize = 64;

/// A finite commutative ring with unit, stored as operation tables.
#[derive(Clone)]
pub struct FiniteRing {
    spec: RingSpec,
    n: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<Option<u32>>,
    one: usize,
    units: Vec<usize>,
    characteristic: u64,
    labels: Vec<String>,
    unit_group: OnceLock<UnitGroupData>,
    additive: OnceLock<CayleyStructure>,
}

impl FiniteRing {
    /// Build from `order x order` addition and multiplication tables
    /// (row-major). Index `0` must be the additive identity.
    pub fn from_tables(
        spec: RingSpec,
        add: Vec<u32>,
        mul: Vec<u32>,
        one: usize,
        labels: Vec<String>,
    ) -> Result<FiniteRing> {
        let n = labels.len();
        if n == 0 || add.len() != n * n || mul.len() != n * n || one >= n {
            return Err(Error::invalid("operation tables have inconsistent sizes"));
        }
        if add.iter().chain(&mul).any(|&x| x as usize >= n) {
            return Err(Error::invalid("operation table entry out of range"));
        }
        if (0..n).any(|a| add[a] as usize != a) {
            return Err(Error::invalid("index 0 is not the additive identity"));
        }
        let neg = (0..n)
            .map(|a| {
                (0..n as u32)
                    .find(|&b| add[a * n + b as usize] == 0)
                    .ok_or_else(|| Error::invalid(format!("element {a} has no negative")))
            })
            .collect::<Result<Vec<u32>>>()?;
        let inv: Vec<Option<u32>> = (0..n)
            .map(|a| (0..n as u32).find(|&b| mul[a * n + b as usize] as usize == one))
            .collect();
        let units: Vec<usize> = (0..n).filter(|&a| inv[a].is_some()).collect();
        let mut characteristic = 1u64;
        let mut x = one;
        while x != 0 {
            x = add[x * n + one] as usize;
            characteristic += 1;
        }
        Ok(FiniteRing {
            spec,
            n,
            add,
            mul,
            neg,
            inv,
            one,
            units,
            characteristic,
            labels,
            unit_group: OnceLock::new(),
            additive: OnceLock::new(),
        })
    }

    /// Parse a ring spec and build it with the default cutoff.
    pub fn parse(spec: &str) -> Result<FiniteRing> {
        Self::from_spec(&spec.parse()?, DEFAULT_CUTOFF)
    }

    pub fn from_spec(spec: &RingSpec, cutoff: usize) -> Result<FiniteRing> {
        match spec {
            RingSpec::Zmod(n) => make_zmod_with(*n, cutoff),
            RingSpec::Gf { p, k, poly } => make_galois_field_with(*p, *k, poly.as_deref(), cutoff),
            RingSpec::Dual(r) => make_dual_with(&Self::from_spec(r, cutoff)?, cutoff),
            RingSpec::Prod(a, b) => make_product_with(
                &Self::from_spec(a, cutoff)?,
                &Self::from_spec(b, cutoff)?,
                cutoff,
            ),
        }
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    /// Canonical spec string.
    pub fn spec_string(&self) -> String {
        self.spec.to_string()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        self.inv[a].map(|x| x as usize)
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.inv[a].is_some()
    }

    /// `a / b` for a unit `b`.
    pub fn div(&self, a: usize, b: usize) -> Option<usize> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `k * 1` for an integer `k`.
    pub fn from_int(&self, k: i64) -> usize {
        let c = self.characteristic as i64;
        let mut r = 0;
        for _ in 0..k.rem_euclid(c) {
            r = self.add(r, self.one);
        }
        r
    }

    /// Sorted list of units.
    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn is_field(&self) -> bool {
        self.n > 1 && self.units.len() == self.n - 1
    }

    /// Check the ring axioms: exhaustively up to order 64, otherwise on
    /// 10^4 random triples from a fixed seed.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.n;
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            let bad = |law: &str| Err(Error::internal(format!("{law} fails at ({a},{b},{c})")));
            if self.add(a, b) != self.add(b, a) {
                return bad("additive commutativity");
            }
            if self.mul(a, b) != self.mul(b, a) {
                return bad("multiplicative commutativity");
            }
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                return bad("additive associativity");
            }
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return bad("multiplicative associativity");
            }
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                return bad("distributivity");
            }
            if self.mul(a, self.one) != a {
                return bad("unit law");
            }
            Ok(())
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..10_000 {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        if n > 1 && self.one == 0 {
            return Err(Error::internal("zero equals one in a nonzero ring"));
        }
        for &u in &self.units {
            let ui = self.inv(u).expect("unit");
            if !self.is_unit(ui) {
                return Err(Error::internal("inverse of a unit is not a unit"));
            }
            for &v in &self.units {
                if !self.is_unit(self.mul(u, v)) {
                    return Err(Error::internal("units are not closed under products"));
                }
            }
        }
        Ok(())
    }

    /// Whether `map` (a bijection on indices) is a ring isomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &FiniteRing, map: &[usize]) -> bool {
        if map.len() != self.n || other.n != self.n || map[self.one] != other.one {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &m in map {
            if m >= self.n || std::mem::replace(&mut seen[m], true) {
                return false;
            }
        }
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                map[self.add(a, b)] == other.add(map[a], map[b])
                    && map[self.mul(a, b)] == other.mul(map[a], map[b])
            })
        })
    }
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, order {})", self.spec, self.n)
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.add == other.add && self.mul == other.mul
    }
}

impl Eq for FiniteRing {}

fn check_cutoff(order: u64, cutoff: usize, what: &str) -> Result<usize> {
    if order == 0 {
        return Err(Error::invalid(format!("{what}: order must be positive")));
    }
    if order > cutoff as u64 {
        return Err(Error::invalid(format!(
            "{what}: order {order} exceeds the cutoff {cutoff}"
        )));
    }
    Ok(order as usize)
}

fn tables(n: usize, add: impl Fn(usize, usize) -> usize, mul: impl Fn(usize, usize) -> usize) -> (Vec<u32>, Vec<u32>) {
    let mut a = Vec::with_capacity(n * n);
    let mut m = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            a.push(add(x, y) as u32);
            m.push(mul(x, y) as u32);
        }
    }
    (a, m)
}

/// `Z/n` with representatives `0..n`.
pub fn make_zmod(n: u64) -> Result<FiniteRing> {
    make_zmod_with(n, DEFAULT_CUTOFF)
}

pub fn make_zmod_with(n: u64, cutoff: usize) -> Result<FiniteRing> {
    let n = check_cutoff(n, cutoff, "zmod")?;
    let (add, mul) = tables(n, |a, b| (a + b) % n, |a, b| a * b % n);
    let labels = (0..n).map(|a| a.to_string()).collect();
    FiniteRing::from_tables(RingSpec::Zmod(n as u64), add, mul, 1 % n, labels)
}

/// `F_{p^k}` as `F_p[x]/(f)`. Element index `sum c_i p^i` is the polynomial
/// `sum c_i x^i`.
pub fn make_galois_field(p: u64, k: u32, poly: Option<&[u64]>) -> Result<FiniteRing> {
    make_galois_field_with(p, k, poly, DEFAULT_CUTOFF)
}

pub fn make_galois_field_with(p: u64, k: u32, poly: Option<&[u64]>, cutoff: usize) -> Result<FiniteRing> {
    if !galois::is_prime(p) {
        return Err(Error::invalid(format!("gf: {p} is not prime")));
    }
    if k == 0 {
        return Err(Error::invalid("gf: degree must be positive"));
    }
    let q = p
        .checked_pow(k)
        .ok_or_else(|| Error::invalid("gf: order overflows"))?;
    let n = check_cutoff(q, cutoff, "gf")?;
    let k = k as usize;
    let modulus = match poly {
        Some(f) => {
            if f.len() != k + 1 || f[k] != 1 || f.iter().any(|&c| c >= p) {
                return Err(Error::invalid(format!(
                    "gf: modulus must be monic of degree {k} with coefficients below {p}"
                )));
            }
            if let Some(w) = galois::factor_witness(f, p) {
                return Err(Error::invalid(format!(
                    "gf: modulus {f:?} is reducible, divisible by {w:?}"
                )));
            }
            f.to_vec()
        }
        None => galois::default_modulus(p, k),
    };
    let pu = p as usize;
    let digits = |mut a: usize| -> Vec<u64> {
        (0..k)
            .map(|_| {
                let d = (a % pu) as u64;
                a /= pu;
                d
            })
            .collect()
    };
    let index = |c: &[u64]| -> usize { c.iter().rev().fold(0, |acc, &d| acc * pu + d as usize) };
    let coeffs: Vec<Vec<u64>> = (0..n).map(digits).collect();
    let (add, mul) = tables(
        n,
        |a, b| {
            let c: Vec<u64> = coeffs[a].iter().zip(&coeffs[b]).map(|(x, y)| (x + y) % p).collect();
            index(&c)
        },
        |a, b| {
            let mut r = galois::rem(&galois::mul(&coeffs[a], &coeffs[b], p), &modulus, p);
            r.resize(k, 0);
            index(&r)
        },
    );
    let labels = coeffs.iter().map(|c| poly_label(c)).collect();
    let spec = RingSpec::Gf {
        p,
        k: k as u32,
        poly: poly.map(<[u64]>::to_vec),
    }
    .canonical();
    FiniteRing::from_tables(spec, add, mul, 1, labels)
}

fn poly_label(c: &[u64]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| match (i, d) {
            (0, d) => d.to_string(),
            (1, 1) => "x".into(),
            (1, d) => format!("{d}x"),
            (i, 1) => format!("x^{i}"),
            (i, d) => format!("{d}x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// `R x S` with componentwise operations; index `a * |S| + b` is `(a, b)`.
pub fn make_product(r: &FiniteRing, s: &FiniteRing) -> Result<FiniteRing> {
    make_product_with(r, s, DEFAULT_CUTOFF)
}

pub fn make_product_with(r: &FiniteRing, s: &FiniteRing, cutoff: usize) -> Result<FiniteRing> {
    let m = s.n;
    let n = check_cutoff((r.n as u64).saturating_mul(m as u64), cutoff, "prod")?;
    let (add, mul) = tables(
        n,
        |x, y| r.add(x / m, y / m) * m + s.add(x % m, y % m),
        |x, y| r.mul(x / m, y / m) * m + s.mul(x % m, y % m),
    );
    let labels = (0..n)
        .map(|x| format!("({},{})", r.label(x / m), s.label(x % m)))
        .collect();
    let spec = RingSpec::Prod(Box::new(r.spec.clone()), Box::new(s.spec.clone()));
    FiniteRing::from_tables(spec, add, mul, r.one * m + s.one, labels)
}

/// Dual numbers `R[t]/(t^2)`; index `a * |R| + b` is `a + b t`.
pub fn make_dual(r: &FiniteRing) -> Result<FiniteRing> {
    make_dual_with(r, DEFAULT_CUTOFF)
}

pub fn make_dual_with(r: &FiniteRing, cutoff: usize) -> Result<FiniteRing> {
    let m = r.n;
    let n = check_cutoff((m as u64).saturating_mul(m as u64), cutoff, "dual")?;
    let (add, mul) = tables(
        n,
        |x, y| r.add(x / m, y / m) * m + r.add(x % m, y % m),
        |x, y| {
            let (a, b, c, d) = (x / m, x % m, y / m, y % m);
            r.mul(a, c) * m + r.add(r.mul(a, d), r.mul(b, c))
        },
    );
    let labels = (0..n)
        .map(|x| {
            let (a, b) = (x / m, x % m);
            if b == 0 {
                r.label(a).to_string()
            } else {
                format!("{}+({})t", r.label(a), r.label(b))
            }
        })
        .collect();
    FiniteRing::from_tables(RingSpec::Dual(Box::new(r.spec.clone())), add, mul, r.one * m, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_examples() {
        let r = make_zmod(6).unwrap();
        assert_eq!(r.units(), &[1, 5]);
        assert_eq!(r.characteristic(), 6);
        let r = make_zmod(1).unwrap();
        assert_eq!(r.units(), &[0]);
        assert_eq!(r.one(), r.zero());
        r.verify_axioms().unwrap();
        assert!(make_zmod(0).is_err());
        assert!(make_zmod(65).is_err());
        assert!(make_zmod_with(65, 100).is_ok());
    }

    #[test]
    fn galois_fields() {
        let f9 = make_galois_field(3, 2, None).unwrap();
        assert_eq!(f9.order(), 9);
        assert!(f9.is_field());
        assert_eq!(f9.characteristic(), 3);
        f9.verify_axioms().unwrap();
        let f4 = make_galois_field(2, 2, Some(&[1, 1, 1])).unwrap();
        assert!(f4.is_field());
        assert!(make_galois_field(3, 2, Some(&[1, 2, 1])).is_err());
        assert!(make_galois_field(4, 1, None).is_err());
        assert_eq!(f9.spec_string(), "gf:3^2");
        let f9b = make_galois_field(3, 2, Some(&[2, 1, 1])).unwrap();
        assert_eq!(f9b.spec_string(), "gf:3^2:poly=2,1,1");
    }

    #[test]
    fn product_and_dual() {
        let z2 = make_zmod(2).unwrap();
        let z3 = make_zmod(3).unwrap();
        let p = make_product(&z2, &z3).unwrap();
        assert_eq!(p.units().len(), 2);
        assert_eq!(p.spec_string(), "prod:zmod:2+zmod:3");
        let v = make_product(&z2, &z2).unwrap();
        assert_eq!(v.units().len(), 1);
        let d = make_dual(&make_galois_field(5, 1, None).unwrap()).unwrap();
        assert_eq!(d.order(), 25);
        assert_eq!(d.units().len(), 20);
        d.verify_axioms().unwrap();
        assert!(make_dual(&make_zmod(9).unwrap()).is_err());
    }

    #[test]
    fn crt_isomorphism() {
        // the map k*1 -> k*1 is the only candidate when 1 generates additively
        for (a, b) in [(2u64, 3u64), (4, 3), (3, 5), (8, 7)] {
            let prod = make_product(&make_zmod(a).unwrap(), &make_zmod(b).unwrap()).unwrap();
            let z = make_zmod(a * b).unwrap();
            let map: Vec<usize> = (0..z.order()).map(|k| prod.from_int(k as i64)).collect();
            assert!(z.is_isomorphism(&prod, &map));
        }
    }

    #[test]
    fn spec_parsing_builds_rings() {
        let r = FiniteRing::parse("prod:zmod:2+zmod:2+zmod:3").unwrap();
        assert_eq!(r.order(), 12);
        assert_eq!(r.spec_string(), "prod:zmod:2+zmod:2+zmod:3");
        assert!(FiniteRing::parse("zmod:100").is_err());
    }
}
