//! Exact scalar fields: the rationals and prime fields of order at most 2^16.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Serializable description of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("fp:")
            .ok_or_else(|| Error::Parse(format!("unknown field '{s}', expected 'q' or 'fp:<p>'")))?
            .parse::<u32>()
            .map_err(|e| Error::Parse(format!("bad prime in '{s}': {e}")))?;
        PrimeField::new(p)?;
        Ok(FieldSpec::Prime(p))
    }
}

/// An exact field. Elements are plain values; every operation goes through
/// the field handle so that prime fields can carry their modulus.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Ord + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        Some(acc)
    }

    /// A random element. Over the rationals this is an integer in
    /// `[-bound, bound]`; over a prime field it is uniform.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Self::Elem;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
}

/// Fields with finitely many elements, enumerable by index.
pub trait FiniteField: Field {
    fn order(&self) -> u64;
    fn element(&self, idx: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;

    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> BigRational {
        let b = bound.max(1);
        self.from_i64(rng.gen_range(-b..=b))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = |e: String| Error::Parse(format!("bad rational '{s}': {e}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|e| bad(format!("{e}")))?;
                let d: BigInt = d.trim().parse().map_err(|e| bad(format!("{e}")))?;
                if d.is_zero() {
                    return Err(bad("zero denominator".into()));
                }
                Ok(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|e| bad(format!("{e}")))?;
                Ok(BigRational::from_integer(n))
            }
        }
    }
}

/// The prime field `Z/pZ` with `p <= 2^16`, so products fit in a `u64` trivially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

pub const MAX_PRIME: u32 = 1 << 16;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::validation(format!(
                "field characteristic {p} is not a prime <= {MAX_PRIME}"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Reduce an arbitrary rational; `None` when the denominator vanishes mod p.
    pub fn reduce(&self, q: &BigRational) -> Option<u32> {
        let p = BigInt::from(self.p);
        let reduce_int = |x: &BigInt| -> u32 {
            let r = ((x % &p) + &p) % &p;
            r.to_u32().expect("residue fits")
        };
        let n = reduce_int(q.numer());
        let d = reduce_int(q.denom());
        let dinv = self.inv(&d)?;
        Some(self.mul(&n, &dinv))
    }

    /// Centered integer lift of a residue, in `(-p/2, p/2]`.
    pub fn lift(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if (*a).is_multiple_of(self.p) {
            return None;
        }
        // extended Euclid on i64
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u32)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R, _bound: i64) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn format(&self, a: &u32) -> String {
        format!("{} mod {}", a, self.p)
    }
    fn parse(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        let (value, modulus) = match s.split_once("mod") {
            Some((v, m)) => (v.trim(), Some(m.trim())),
            None => (s, None),
        };
        if let Some(m) = modulus {
            let m: u32 = m
                .parse()
                .map_err(|e| Error::Parse(format!("bad modulus in '{s}': {e}")))?;
            if m != self.p {
                return Err(Error::Parse(format!(
                    "scalar '{s}' is over fp:{m}, expected fp:{}",
                    self.p
                )));
            }
        }
        let v: BigInt = value
            .parse()
            .map_err(|e| Error::Parse(format!("bad residue '{s}': {e}")))?;
        let p = BigInt::from(self.p);
        let r = ((v % &p) + &p) % &p;
        Ok(r.to_u32().expect("residue fits"))
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u64 {
        self.p as u64
    }
    fn element(&self, idx: u64) -> u32 {
        (idx % self.p as u64) as u32
    }
    fn index_of(&self, a: &u32) -> u64 {
        *a as u64
    }
}

/// True when a rational is an integer of absolute value at most `bound`.
pub fn is_small_integer(q: &BigRational, bound: i64) -> bool {
    q.is_integer() && q.numer().abs() <= BigInt::from(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse_table() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7u32 {
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), 1);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn rejects_composite_and_large_moduli() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(65537).is_err());
        assert!(PrimeField::new(65521).is_ok());
    }

    #[test]
    fn scalar_text_round_trip() {
        let q = Rationals;
        let x = q.parse("-3/7").unwrap();
        assert_eq!(q.format(&x), "-3/7");
        assert_eq!(q.format(&q.parse("4/2").unwrap()), "2");
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.parse("2 mod 5").unwrap(), 2);
        assert_eq!(f.parse("-1").unwrap(), 4);
        assert!(f.parse("2 mod 7").is_err());
    }

    #[test]
    fn field_spec_text() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("fp:5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert!("fp:6".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(3).to_string(), "fp:3");
    }

    #[test]
    fn reduce_rational_mod_p() {
        let f = PrimeField::new(7).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.reduce(&half), Some(4));
        let seventh = BigRational::new(BigInt::from(1), BigInt::from(7));
        assert_eq!(f.reduce(&seventh), None);
    }
}
