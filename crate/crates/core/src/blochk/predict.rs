use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::prebloch::{
    bloch_group, ge2_bloch_group, lambda_s2, milnor_k2_presented, prebloch_classical, require_local_residue,
    sym_square_units, MilnorK2,
};
use crate::abelian::int::{odd_part, ser_big};
use crate::abelian::{exterior_square_presented, tor, tor_tilde, AbHom, FinAbGroup, IntMatrix};
use crate::error::{Error, Result};
use crate::rings::FiniteRing;

/// The groups in `0 -> B -> P -> S^2(A^x) -> K_2^M -> 0` and whether the
/// sequence is exact.
#[derive(Clone, Debug, Serialize)]
pub struct FourTermReport {
    pub ring: String,
    pub hypothesis_met: bool,
    pub bloch: FinAbGroup,
    pub prebloch: FinAbGroup,
    pub sym_square: FinAbGroup,
    pub milnor_k2: FinAbGroup,
    #[serde(serialize_with = "ser_big")]
    pub image_order: BigInt,
    /// `|P| = |B| |im lambda|`.
    pub left_orders: bool,
    /// `|S^2| = |im lambda| |K_2^M|`.
    pub right_orders: bool,
    /// `im lambda = ker(S^2 -> K_2^M)` as subgroups.
    pub middle_exact: bool,
    pub pass: bool,
}

/// The map `S^2(A^x) -> K_2^M(A)` induced by the identity on pairs.
fn s2_to_k2(r: &FiniteRing, k2: &MilnorK2) -> Result<AbHom> {
    let s2 = sym_square_units(r)?;
    let n = s2.group().ngens();
    let mut m = IntMatrix::zeros(k2.group.ngens(), n);
    for g in 0..n {
        for (i, v) in k2.reduce_pairs(s2.presented().generator(g)).into_iter().enumerate() {
            m.set(i, g, v);
        }
    }
    AbHom::new(s2.group().clone(), k2.group.clone(), m)
}

pub fn four_term_check(r: &FiniteRing) -> Result<FourTermReport> {
    let p = prebloch_classical(r)?;
    let lambda = lambda_s2(&p, r)?;
    let bloch = lambda.kernel()?;
    let k2 = milnor_k2_presented(r)?;
    let pi = s2_to_k2(r, &k2)?;
    let finite = |g: &FinAbGroup| g.order().ok_or_else(|| Error::invalid(format!("{g} is infinite")));
    let image_order = lambda.image_order()?;
    let left_orders = p.group.is_finite() && finite(&p.group)? == finite(&bloch)? * &image_order;
    let right_orders = finite(&lambda.target)? == &image_order * finite(&k2.group)?;
    let composite_zero = lambda.compose(&pi)?.matrix.iter().all(|(_, _, v)| v.is_zero());
    let middle_exact = composite_zero && pi.kernel()?.order() == Some(image_order.clone()) && pi.is_surjective()?;
    Ok(FourTermReport {
        ring: r.spec_string(),
        hypothesis_met: MilnorK2::hypothesis_met(r),
        pass: left_orders && right_orders && middle_exact,
        bloch,
        prebloch: p.group,
        sym_square: lambda.target,
        milnor_k2: k2.group,
        image_order,
        left_orders,
        right_orders,
        middle_exact,
    })
}

/// `G_A + A_{A^x}`, the predicted abelianization of `PGL_2(A)` for rings
/// universal for GE_2.
pub fn predict_h1(r: &FiniteRing) -> Result<FinAbGroup> {
    if let Some(w) = r.menal_witness() {
        return Err(Error::hypothesis(format!(
            "{} is not universal for GE_2: {w}",
            r.spec_string()
        )));
    }
    Ok(r.square_class_group().direct_sum(&r.coinvariants_a()))
}

/// `0 -> Lambda^2 A^x / <2 (a ^ (1 - a))> -> H_2 -> mu_2 -> 1` together with
/// the odd-part comparison against `K_2^M`.
#[derive(Clone, Debug, Serialize)]
pub struct H2Prediction {
    pub ring: String,
    pub subgroup: FinAbGroup,
    pub quotient: FinAbGroup,
    #[serde(serialize_with = "ser_big")]
    pub order: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub odd_part: BigInt,
    pub milnor_k2: FinAbGroup,
    #[serde(serialize_with = "ser_big")]
    pub milnor_k2_odd_part: BigInt,
}

impl H2Prediction {
    pub fn odd_parts_agree(&self) -> bool {
        self.odd_part == self.milnor_k2_odd_part
    }
}

pub fn predict_h2(r: &FiniteRing) -> Result<H2Prediction> {
    require_local_residue(r, &[2, 3, 4])?;
    let u = r.unit_group();
    let l2 = exterior_square_presented(u.group())?;
    let w = r.wedge_set();
    let mut m = IntMatrix::zeros(l2.group().ngens(), w.len());
    for (j, &a) in w.iter().enumerate() {
        let v = l2.apply(&u.log(a).expect("unit"), &u.log(r.sub(r.one(), a)).expect("unit"));
        for (i, x) in v.into_iter().enumerate() {
            m.set(i, j, x * 2);
        }
    }
    let subgroup = AbHom::new(FinAbGroup::free(w.len()), l2.group().clone(), m)?.cokernel()?;
    let quotient = r.mu2();
    let order = subgroup.order().expect("finite") * quotient.order().expect("finite");
    let k2 = milnor_k2_presented(r)?.group;
    let k2_order = k2.order().expect("finite");
    Ok(H2Prediction {
        ring: r.spec_string(),
        odd_part: odd_part(&order),
        milnor_k2_odd_part: odd_part(&k2_order),
        subgroup,
        quotient,
        order,
        milnor_k2: k2,
    })
}

/// Predicted low-degree homology of `PGL_2(F_q)` and the two Bloch-Wigner
/// sequences.
#[derive(Clone, Debug, Serialize)]
pub struct BWPrediction {
    pub ring: String,
    pub h1: FinAbGroup,
    pub h2_subgroup: FinAbGroup,
    pub h2_quotient: FinAbGroup,
    /// `(q - 1) |B_E|`.
    #[serde(serialize_with = "ser_big")]
    pub h3_order: BigInt,
    pub tor_part: FinAbGroup,
    pub be_part: FinAbGroup,
    pub bloch: FinAbGroup,
    pub tor_tilde: FinAbGroup,
    /// `|Tor~| |B|`, the order of `K_3^ind` according to the classical sequence.
    #[serde(serialize_with = "ser_big")]
    pub k3_order: BigInt,
}

impl BWPrediction {
    /// `h3_order = |tor_part| |be_part|`.
    pub fn is_consistent(&self) -> bool {
        match (self.tor_part.order(), self.be_part.order()) {
            (Some(a), Some(b)) => a * b == self.h3_order,
            _ => false,
        }
    }
}

pub fn predict_h3(r: &FiniteRing) -> Result<BWPrediction> {
    if !r.is_field() {
        return Err(Error::hypothesis(format!("{} is not a field", r.spec_string())));
    }
    let q = r.order();
    if matches!(q, 2 | 3 | 4 | 8) {
        return Err(Error::hypothesis(format!("q = {q} is excluded")));
    }
    let mu = r.unit_group().group().clone();
    let tor_part = tor(&mu, &mu)?;
    let be_part = ge2_bloch_group(r)?;
    let h3_order = tor_part.order().expect("finite") * be_part.order().expect("finite");
    let bloch = bloch_group(r)?;
    let mu2_order = r.mu2().order_u64().expect("finite") as u32;
    let tt = tor_tilde(&tor_part, mu2_order)?.group;
    let k3_order = tt.order().expect("finite") * bloch.order().unwrap_or_else(BigInt::one);
    let h2 = predict_h2(r)?;
    Ok(BWPrediction {
        ring: r.spec_string(),
        h1: predict_h1(r)?,
        h2_subgroup: h2.subgroup,
        h2_quotient: h2.quotient,
        h3_order,
        tor_part,
        be_part,
        bloch,
        tor_tilde: tt,
        k3_order,
    })
}
