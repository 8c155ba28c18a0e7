//! Dense polynomial arithmetic over `F_p`, coefficients in ascending order.

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo a nonzero `b`.
pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * lead_inv % p;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Monic polynomials of `degree` in lexicographic order of their ascending
/// coefficient lists.
pub(crate) fn monic_polys(p: u64, degree: usize) -> impl Iterator<Item = Vec<u64>> {
    let count = p.pow(degree as u32);
    (0..count).map(move |mut idx| {
        let mut c = vec![0; degree + 1];
        // lexicographic on (c0, c1, ...) means c0 varies slowest
        for i in (0..degree).rev() {
            c[i] = idx % p;
            idx /= p;
        }
        c[degree] = 1;
        c
    })
}

/// A monic factor of degree `1..=deg/2`, if `f` is reducible.
pub(crate) fn factor_witness(f: &[u64], p: u64) -> Option<Vec<u64>> {
    let deg = f.len() - 1;
    (1..=deg / 2).find_map(|d| monic_polys(p, d).find(|g| rem(f, g, p).is_empty()))
}

/// The lexicographically smallest monic irreducible of the given degree.
pub(crate) fn default_modulus(p: u64, degree: usize) -> Vec<u64> {
    monic_polys(p, degree)
        .find(|f| factor_witness(f, p).is_none())
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 3), vec![1, 0, 1, 1]);
        assert_eq!(default_modulus(5, 1), vec![0, 1]);
    }

    #[test]
    fn witness_for_reducible() {
        // x^2 + 2x + 1 = (x + 1)^2 over F_3
        assert_eq!(factor_witness(&[1, 2, 1], 3), Some(vec![1, 1]));
        assert_eq!(factor_witness(&[1, 0, 1], 3), None);
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
