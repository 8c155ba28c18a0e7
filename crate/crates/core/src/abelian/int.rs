//! Coefficient arithmetic shared by the sparse eliminators.
//!
//! Elimination first runs on checked `i64` and restarts on [`BigInt`] as soon
//! as any intermediate value leaves the machine range, so results are always
//! exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Marker returned when a checked `i64` operation overflows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub trait Coeff: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn nil() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `self + a * b`, or `Overflow`.
    fn add_mul(&self, a: &Self, b: &Self) -> Result<Self, Overflow>;
    fn mul(&self, b: &Self) -> Result<Self, Overflow>;
    fn neg(&self) -> Result<Self, Overflow>;
    /// Euclidean quotient rounded towards zero; `b` is nonzero.
    fn quot(&self, b: &Self) -> Self;
    fn divides(&self, other: &Self) -> bool;
    /// Extended gcd: `(g, s, t)` with `g = s*a + t*b`, `g > 0`.
    fn xgcd(a: &Self, b: &Self) -> Result<(Self, Self, Self), Overflow>;
    fn abs_key(&self) -> BigInt;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i64 {
    fn nil() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn add_mul(&self, a: &Self, b: &Self) -> Result<Self, Overflow> {
        a.checked_mul(*b)
            .and_then(|p| self.checked_add(p))
            .ok_or(Overflow)
    }
    fn mul(&self, b: &Self) -> Result<Self, Overflow> {
        self.checked_mul(*b).ok_or(Overflow)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    fn quot(&self, b: &Self) -> Self {
        self / b
    }
    fn divides(&self, other: &Self) -> bool {
        *self != 0 && other % self == 0
    }
    fn xgcd(a: &Self, b: &Self) -> Result<(Self, Self, Self), Overflow> {
        let (mut old_r, mut r) = (*a as i128, *b as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        let (mut old_t, mut t) = (0i128, 1i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
            (old_t, t) = (t, old_t - q * t);
        }
        if old_r < 0 {
            old_r = -old_r;
            old_s = -old_s;
            old_t = -old_t;
        }
        let cast = |v: i128| i64::try_from(v).map_err(|_| Overflow);
        Ok((cast(old_r)?, cast(old_s)?, cast(old_t)?))
    }
    fn abs_key(&self) -> BigInt {
        BigInt::from(self.unsigned_abs())
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn add_mul(&self, a: &Self, b: &Self) -> Result<Self, Overflow> {
        Ok(self + a * b)
    }
    fn mul(&self, b: &Self) -> Result<Self, Overflow> {
        Ok(self * b)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
    fn quot(&self, b: &Self) -> Self {
        self / b
    }
    fn divides(&self, other: &Self) -> bool {
        !Zero::is_zero(self) && (other % self).is_zero()
    }
    fn xgcd(a: &Self, b: &Self) -> Result<(Self, Self, Self), Overflow> {
        let e = a.extended_gcd(b);
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        Ok((g, s, t))
    }
    fn abs_key(&self) -> BigInt {
        self.abs()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Convert to `i64` when the value fits.
pub fn small(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

/// Non-negative residue of `v` modulo `m`; the identity when `m == 0`.
pub fn reduce_mod(v: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        v.clone()
    } else {
        v.mod_floor(m)
    }
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        BigInt::zero()
    } else {
        a.lcm(b)
    }
}

/// Largest odd divisor of a positive integer.
pub fn odd_part(v: &BigInt) -> BigInt {
    let mut v = v.abs();
    if v.is_zero() {
        return v;
    }
    let two = BigInt::from(2);
    while (&v % &two).is_zero() {
        v /= &two;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xgcd_small_and_big_agree() {
        for (a, b) in [(12i64, 18i64), (-7, 5), (0, 9), (9, 0), (6, -4)] {
            let (g, s, t) = <i64 as Coeff>::xgcd(&a, &b).unwrap();
            assert_eq!(g, s * a + t * b);
            assert!(g > 0);
            let (gb, _, _) = <BigInt as Coeff>::xgcd(&BigInt::from(a), &BigInt::from(b)).unwrap();
            assert_eq!(BigInt::from(g), gb);
        }
    }

    #[test]
    fn checked_overflow_is_reported() {
        assert_eq!(i64::MAX.add_mul(&2, &3), Err(Overflow));
        assert_eq!(1i64.add_mul(&2, &3), Ok(7));
    }

    #[test]
    fn odd_part_strips_twos() {
        assert_eq!(odd_part(&BigInt::from(48)), BigInt::from(3));
        assert_eq!(odd_part(&BigInt::from(1)), BigInt::from(1));
    }
}

/// Serialize a `BigInt` as its decimal string.
pub(crate) fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
