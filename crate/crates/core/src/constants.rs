//! Externally sourced values, read from `data/constants.toml`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::abelian::FinAbGroup;

const SOURCE: &str = include_str!("../data/constants.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct GroupConstant {
    pub factors: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LiteratureConstant {
    pub formula: String,
    pub note: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Constants {
    pub groups: BTreeMap<String, GroupConstant>,
    pub literature: BTreeMap<String, LiteratureConstant>,
    /// `dihedral["d3"][n - 1]` lists `H_n(D_3)`.
    pub dihedral: BTreeMap<String, Vec<Vec<String>>>,
    pub pgl2_z: Pgl2Z,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Pgl2Z {
    pub h1: Vec<String>,
    pub h2: Vec<String>,
    pub h3_order: String,
}

pub fn constants() -> &'static Constants {
    static C: OnceLock<Constants> = OnceLock::new();
    C.get_or_init(|| toml::from_str(SOURCE).expect("constants file is valid TOML"))
}

/// A named group constant. Panics on unknown names, which are programming
/// errors.
pub fn group(name: &str) -> FinAbGroup {
    let c = constants()
        .groups
        .get(name)
        .unwrap_or_else(|| panic!("no constant named {name}"));
    to_group(&c.factors)
}

fn to_group(factors: &[String]) -> FinAbGroup {
    let factors: Vec<BigInt> = factors.iter().map(|f| f.parse().expect("integer factor")).collect();
    FinAbGroup::new(factors).expect("constants are in invariant-factor form")
}

/// The listed `H_n(D_m)` for `m <= 3`, `1 <= n <= 3`.
pub fn dihedral_homology(m: usize, n: usize) -> Option<FinAbGroup> {
    let row = constants().dihedral.get(&format!("d{m}"))?;
    row.get(n.checked_sub(1)?).map(|f| to_group(f))
}

pub fn pgl2_z_h1() -> FinAbGroup {
    to_group(&constants().pgl2_z.h1)
}

pub fn pgl2_z_h2() -> FinAbGroup {
    to_group(&constants().pgl2_z.h2)
}

pub fn pgl2_z_h3_order() -> BigInt {
    constants().pgl2_z.h3_order.parse().expect("integer order")
}

/// `|K_3^ind(F_q)|` from the literature formula.
pub fn k3ind_order(q: u64) -> BigInt {
    debug_assert_eq!(constants().literature["k3ind_finite_field"].formula, "q^2 - 1");
    BigInt::from(q) * BigInt::from(q) - 1
}
