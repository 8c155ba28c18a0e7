//! The ring spec mini-language.
//!
//! ```text
//! ring  := "zmod:" N
//!        | "gf:" P "^" K [ ":poly=" C ( "," C )* ]
//!        | "dual:" ring
//!        | "prod:" ring ( "+" ring )+
//! ```
//!
//! Polynomial coefficients are listed in ascending order and must describe a
//! monic polynomial of degree `K`. `prod` with more than two factors folds to
//! the left. The canonical form omits `:poly=` when it equals the default
//! modulus.

use std::fmt;
use std::str::FromStr;

use super::galois::{default_modulus, is_prime};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Zmod(u64),
    Gf { p: u64, k: u32, poly: Option<Vec<u64>> },
    Dual(Box<RingSpec>),
    Prod(Box<RingSpec>, Box<RingSpec>),
}

impl RingSpec {
    /// Same ring with redundant information removed.
    pub fn canonical(&self) -> RingSpec {
        match self {
            RingSpec::Gf { p, k, poly } => {
                let small = is_prime(*p) && p.checked_pow(*k).is_some_and(|q| q <= 1 << 16);
                let poly = poly
                    .clone()
                    .filter(|f| !small || *f != default_modulus(*p, *k as usize));
                RingSpec::Gf { p: *p, k: *k, poly }
            }
            RingSpec::Dual(r) => RingSpec::Dual(Box::new(r.canonical())),
            RingSpec::Prod(a, b) => RingSpec::Prod(Box::new(a.canonical()), Box::new(b.canonical())),
            z => z.clone(),
        }
    }

    /// Number of elements, without building anything.
    pub fn order(&self) -> Option<u64> {
        match self {
            RingSpec::Zmod(n) => Some(*n),
            RingSpec::Gf { p, k, .. } => p.checked_pow(*k),
            RingSpec::Dual(r) => r.order().and_then(|n| n.checked_mul(n)),
            RingSpec::Prod(a, b) => a.order()?.checked_mul(b.order()?),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod(n) => write!(f, "zmod:{n}"),
            RingSpec::Gf { p, k, poly: None } => write!(f, "gf:{p}^{k}"),
            RingSpec::Gf { p, k, poly: Some(c) } => {
                let c: Vec<String> = c.iter().map(u64::to_string).collect();
                write!(f, "gf:{p}^{k}:poly={}", c.join(","))
            }
            RingSpec::Dual(r) => write!(f, "dual:{r}"),
            RingSpec::Prod(a, b) => match **a {
                // left-nested products print flat
                RingSpec::Prod(..) => write!(f, "{a}+{b}"),
                _ => write!(f, "prod:{a}+{b}"),
            },
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn fail(&self, reason: impl Into<String>) -> Error {
        let token = self
            .rest()
            .split(['+', ':', ','])
            .next()
            .filter(|t| !t.is_empty())
            .unwrap_or(self.rest());
        Error::RingSpec {
            token: if token.is_empty() { "<end>".into() } else { token.into() },
            reason: reason.into(),
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, Error> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.fail("expected a number"));
        }
        let v = self.rest()[..digits]
            .parse()
            .map_err(|_| self.fail("number out of range"))?;
        self.pos += digits;
        Ok(v)
    }

    fn ring(&mut self) -> Result<RingSpec, Error> {
        if self.eat("zmod:") {
            return Ok(RingSpec::Zmod(self.number()?));
        }
        if self.eat("gf:") {
            let p = self.number()?;
            if !self.eat("^") {
                return Err(self.fail("expected `^` after the characteristic"));
            }
            let k = self.number()?;
            let k = u32::try_from(k).map_err(|_| self.fail("degree out of range"))?;
            let mut poly = None;
            if self.eat(":poly=") {
                let mut c = vec![self.number()?];
                while self.eat(",") {
                    c.push(self.number()?);
                }
                poly = Some(c);
            }
            return Ok(RingSpec::Gf { p, k, poly });
        }
        if self.eat("dual:") {
            return Ok(RingSpec::Dual(Box::new(self.ring()?)));
        }
        if self.eat("prod:") {
            let mut acc = self.ring()?;
            if !self.eat("+") {
                return Err(self.fail("a product needs at least two factors"));
            }
            loop {
                let next = self.ring()?;
                acc = RingSpec::Prod(Box::new(acc), Box::new(next));
                if !self.eat("+") {
                    break;
                }
            }
            return Ok(acc);
        }
        Err(self.fail("unknown ring constructor (expected zmod:, gf:, dual: or prod:)"))
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let mut p = Parser { src: s, pos: 0 };
        let r = p.ring()?;
        if !p.rest().is_empty() {
            return Err(p.fail("unexpected trailing input"));
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in [
            "zmod:6",
            "gf:3^2",
            "gf:2^2:poly=1,0,0",
            "dual:gf:5^1",
            "prod:zmod:2+zmod:3",
            "prod:zmod:2+zmod:2+zmod:3",
            "dual:prod:zmod:2+zmod:3",
        ] {
            assert_eq!(s.parse::<RingSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn canonical_drops_default_poly() {
        let r: RingSpec = "gf:3^2:poly=1,0,1".parse().unwrap();
        assert_eq!(r.canonical().to_string(), "gf:3^2");
    }

    #[test]
    fn errors_name_the_token() {
        match "prod:zmod:2+ring:7".parse::<RingSpec>() {
            Err(Error::RingSpec { token, .. }) => assert_eq!(token, "ring"),
            other => panic!("unexpected {other:?}"),
        }
        assert!("zmod:".parse::<RingSpec>().is_err());
        assert!("zmod:4 extra".parse::<RingSpec>().is_err());
        assert!("prod:zmod:4".parse::<RingSpec>().is_err());
    }
}
