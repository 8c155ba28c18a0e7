use num_bigint::BigInt;
use serde::Serialize;

use super::bar::{bar_homology_with, induced_map_with, BarBudget};
use super::group::{dihedral, FiniteGroup, GroupHom};
use crate::abelian::int::ser_big;
use crate::abelian::{tor, AbHom, FinAbGroup};
use crate::constants;
use crate::error::{Error, Result};

/// Integer 2x2 matrix modulo `+-1`, for checking the dihedral subgroups of
/// `PGL_2(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct ZMat([i64; 4]);

impl ZMat {
    fn mul(self, o: ZMat) -> ZMat {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        ZMat([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h]).canonical()
    }

    /// Sign making the first nonzero entry positive.
    fn canonical(self) -> ZMat {
        let first = self.0.iter().copied().find(|&x| x != 0).unwrap_or(1);
        if first < 0 {
            ZMat(self.0.map(|x| -x))
        } else {
            self
        }
    }

    fn det(self) -> i64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }
}

const ID: ZMat = ZMat([1, 0, 0, 1]);
/// The reflection shared by both dihedral subgroups.
const S: ZMat = ZMat([0, 1, 1, 0]);
/// Rotation of order 2 in `PGL_2(Z)`.
const R2: ZMat = ZMat([0, 1, -1, 0]);
/// Rotation of order 3 in `PGL_2(Z)`.
const R3: ZMat = ZMat([0, -1, 1, 1]);

fn generated(gens: &[ZMat]) -> Vec<ZMat> {
    let mut out = vec![ID];
    let mut i = 0;
    while i < out.len() {
        for &g in gens {
            let y = out[i].mul(g);
            if !out.contains(&y) {
                out.push(y);
            }
        }
        i += 1;
    }
    out
}

fn zorder(g: ZMat) -> usize {
    let mut k = 1;
    let mut x = g;
    while x != ID {
        x = x.mul(g);
        k += 1;
    }
    k
}

/// Check that `D_2 = <R2, S>` and `D_3 = <R3, S>` in `PGL_2(Z)` are dihedral
/// of orders 4 and 6 meeting in `D_1 = <S>`.
pub fn check_dihedral_realization() -> Result<()> {
    for g in [S, R2, R3] {
        if g.det().abs() != 1 {
            return Err(Error::internal("realization matrix is not invertible over Z"));
        }
    }
    let d2 = generated(&[R2, S]);
    let d3 = generated(&[R3, S]);
    let dihedral_rel = |r: ZMat, n: usize| zorder(r) == n && zorder(S) == 2 && zorder(r.mul(S)) == 2;
    if d2.len() != 4 || d3.len() != 6 || !dihedral_rel(R2, 2) || !dihedral_rel(R3, 3) {
        return Err(Error::internal("dihedral realization has the wrong shape"));
    }
    let common: Vec<ZMat> = d2.iter().copied().filter(|x| d3.contains(x)).collect();
    if common.len() != 2 || !common.contains(&S) {
        return Err(Error::internal("dihedral subgroups do not meet in <S>"));
    }
    Ok(())
}

/// One degree of the Mayer-Vietoris sequence.
#[derive(Clone, Debug, Serialize)]
pub struct MvDegree {
    pub degree: usize,
    /// `coker(H_n(D_1) -> H_n(D_2) + H_n(D_3))`.
    pub cokernel: FinAbGroup,
    /// `ker(H_{n-1}(D_1) -> H_{n-1}(D_2) + H_{n-1}(D_3))`.
    pub kernel_below: FinAbGroup,
    /// `H_n(PGL_2(Z))`, known exactly when `kernel_below` vanishes.
    pub group: Option<FinAbGroup>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MayerVietorisReport {
    pub degrees: Vec<MvDegree>,
    /// `H_n(D_k)` for `k = 1, 2, 3` and `n = 1, 2, 3`.
    pub dihedral: Vec<(String, usize, FinAbGroup)>,
    #[serde(serialize_with = "ser_big")]
    pub h3_lower_bound: BigInt,
    /// `|Tor(mu(Z), mu(Z)) + Z/2| |P(Z)|`.
    #[serde(serialize_with = "ser_big")]
    pub h3_upper_bound: BigInt,
    /// The order once both bounds agree.
    pub h3_order: Option<String>,
    /// `H_2(PGL_2(Z))` from `H_2(PB_2(Z)) = 0` and `mu_2(Z)`.
    pub h2_from_constants: FinAbGroup,
}

struct Amalgam {
    d1: FiniteGroup,
    d2: FiniteGroup,
    d3: FiniteGroup,
    i2: GroupHom,
    i3: GroupHom,
}

fn amalgam() -> Result<Amalgam> {
    let d1 = dihedral(1)?;
    let d2 = dihedral(2)?;
    let d3 = dihedral(3)?;
    // the reflection s of D_1 goes to s in both
    let i2 = GroupHom::from_generators(&d1, &d2, &[2])?;
    let i3 = GroupHom::from_generators(&d1, &d3, &[3])?;
    Ok(Amalgam { d1, d2, d3, i2, i3 })
}

fn mv_map(a: &Amalgam, n: usize, budget: &BarBudget) -> Result<AbHom> {
    let f2 = induced_map_with(&a.i2, &a.d1, &a.d2, n, budget)?;
    let f3 = induced_map_with(&a.i3, &a.d1, &a.d3, n, budget)?;
    let neg = AbHom::new(f3.source.clone(), f3.target.clone(), {
        let mut m = f3.matrix.clone();
        for (r, c, v) in f3.matrix.iter() {
            m.set(r, c, -v.clone());
        }
        m
    })?;
    f2.pair(&neg)
}

fn degree(a: &Amalgam, n: usize, budget: &BarBudget) -> Result<MvDegree> {
    let cokernel = if n == 0 {
        FinAbGroup::integers()
    } else {
        mv_map(a, n, budget)?.cokernel()?
    };
    let kernel_below = match n {
        0 => FinAbGroup::trivial(),
        // Z -> Z + Z is the diagonal
        1 => FinAbGroup::trivial(),
        _ => mv_map(a, n - 1, budget)?.kernel()?,
    };
    let group = kernel_below.is_trivial().then(|| cokernel.clone());
    Ok(MvDegree {
        degree: n,
        cokernel,
        kernel_below,
        group,
    })
}

/// Homology of `PGL_2(Z) = D_2 *_{D_1} D_3` in degrees 1 to 3, with the
/// bounds on `|H_3|` from the constants.
pub fn pgl2z_mayer_vietoris() -> Result<MayerVietorisReport> {
    pgl2z_mayer_vietoris_with(&BarBudget::default())
}

pub fn pgl2z_mayer_vietoris_with(budget: &BarBudget) -> Result<MayerVietorisReport> {
    check_dihedral_realization()?;
    let a = amalgam()?;
    let mut dihedral_table = Vec::new();
    for (name, g) in [("D1", &a.d1), ("D2", &a.d2), ("D3", &a.d3)] {
        for n in 1..=3 {
            dihedral_table.push((name.to_string(), n, bar_homology_with(g, n, budget)?));
        }
    }
    let degrees = (1..=3).map(|n| degree(&a, n, budget)).collect::<Result<Vec<_>>>()?;
    let h3_lower_bound = degrees[2].cokernel.order().expect("finite");
    let tor_part = constants::group("tor_mu_z");
    let mu_z = FinAbGroup::cyclic(2);
    debug_assert_eq!(tor(&mu_z, &mu_z)?, tor_part);
    let left = tor_part.direct_sum(&constants::group("h3_pb2_z_extra"));
    let h3_upper_bound = left.order().expect("finite") * constants::group("prebloch_z").order().expect("finite");
    let h3_order = (h3_lower_bound == h3_upper_bound).then(|| h3_upper_bound.to_string());
    let h2_pb2 = constants::group("h2_pb2_z");
    if !h2_pb2.is_trivial() {
        return Err(Error::internal("H_2(PB_2(Z)) constant is expected to vanish"));
    }
    Ok(MayerVietorisReport {
        degrees,
        dihedral: dihedral_table,
        h3_lower_bound,
        h3_upper_bound,
        h3_order,
        h2_from_constants: constants::group("mu2_z"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realization() {
        check_dihedral_realization().unwrap();
    }

    #[test]
    fn report() {
        let r = pgl2z_mayer_vietoris().unwrap();
        assert_eq!(r.degrees[0].group.as_ref().unwrap(), &constants::pgl2_z_h1());
        assert_eq!(r.degrees[1].group.as_ref().unwrap(), &constants::pgl2_z_h2());
        assert_eq!(r.h3_lower_bound, BigInt::from(24));
        assert_eq!(r.h3_order.as_deref(), Some("24"));
        assert_eq!(r.h2_from_constants, constants::pgl2_z_h2());
    }
}
