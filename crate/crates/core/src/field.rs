//! Scalar fields: the rationals and prime fields of characteristic at least 5.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// Serializable descriptor of a scalar field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub characteristic: u64,
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec { kind: FieldKind::Rationals, characteristic: 0 }
    }

    pub fn prime(p: u64) -> Result<Self> {
        PrimeField::new(p).map(|f| f.spec())
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            FieldKind::Rationals if self.characteristic == 0 => Ok(()),
            FieldKind::Rationals => Err(Error::InvalidField("rationals have characteristic 0".into())),
            FieldKind::PrimeField => PrimeField::new(self.characteristic).map(|_| ()),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `QQ`, `GF(p)` or a bare prime `p`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("qq") || t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::rationals());
        }
        let inner = t
            .strip_prefix("GF(")
            .or_else(|| t.strip_prefix("gf("))
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        let p: u64 = inner.parse().map_err(|_| Error::InvalidField(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "QQ"),
            FieldKind::PrimeField => write!(f, "GF({})", self.characteristic),
        }
    }
}

pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// `a -= c * b`, the elimination inner loop.
    fn sub_mul_assign(&self, a: &mut Self::Elem, c: &Self::Elem, b: &Self::Elem);
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    /// Image of `a` in F_q, or `None` when a denominator vanishes mod q
    /// (or `a` does not live in a field of characteristic 0 or q).
    fn residue(&self, a: &Self::Elem, q: u64) -> Option<u64>;
    /// Random coefficient: uniform in {-3..3} over Q, uniform over F_p.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Random nonzero element for rescalings.
    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let v = self.sample(rng);
            if !self.is_zero(&v) {
                return v;
            }
        }
    }

    /// Size used to prefer cheap pivots; constant for fixed-size fields.
    fn height(&self, _a: &Self::Elem) -> u64 {
        0
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::rationals()
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_i64(v)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a.add(b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a.sub(b)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a.mul(b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        a.neg()
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        a.recip()
    }
    fn sub_mul_assign(&self, a: &mut Rational, c: &Rational, b: &Rational) {
        if !c.is_zero() && !b.is_zero() {
            *a = a.sub(&c.mul(b));
        }
    }
    fn parse(&self, s: &str) -> Result<Rational> {
        parse_rational(s).map(Rational::from_big)
    }
    fn format(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn residue(&self, a: &Rational, q: u64) -> Option<u64> {
        match a {
            Rational::Small(n, d) => {
                let num = n.rem_euclid(q as i64) as u64;
                let den_inv = inv_mod((*d as u64) % q, q)?;
                Some(mul_mod(num, den_inv, q))
            }
            Rational::Big(v) => {
                let qb = BigInt::from(q);
                let num = v.numer().mod_floor(&qb).to_u64()?;
                let den = v.denom().mod_floor(&qb).to_u64()?;
                let den_inv = inv_mod(den, q)?;
                Some(mul_mod(num, den_inv, q))
            }
        }
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Rational {
        self.from_i64(rng.gen_range(-3..=3))
    }
    fn height(&self, a: &Rational) -> u64 {
        a.height()
    }
}

/// Parses `"7"`, `"-193/4"` or `" 3 / 6 "` into a normalized rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Arithmetic modulo a prime `p` with `5 <= p < 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 {
            return Err(Error::InvalidField(format!("characteristic {p} is below 5")));
        }
        if p >= 1 << 32 {
            return Err(Error::InvalidField(format!("prime {p} exceeds 32 bits")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric lift into (-p/2, p/2].
    pub fn lift(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec { kind: FieldKind::PrimeField, characteristic: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        inv_mod(*a, self.p)
    }
    fn sub_mul_assign(&self, a: &mut u64, c: &u64, b: &u64) {
        let t = mul_mod(*c, *b, self.p);
        *a = self.sub(a, &t);
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let r = parse_rational(s)?;
        Rationals.residue(&Rational::from_big(r), self.p).ok_or_else(|| Error::FieldReductionImpossible {
            value: s.trim().to_string(),
            modulus: self.p,
        })
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn residue(&self, a: &u64, q: u64) -> Option<u64> {
        (q == self.p).then_some(*a)
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(p as i128) as u64)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Converts a rational known to be an integer into `i64`.
pub fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_from_str() {
        assert_eq!("QQ".parse::<FieldSpec>().unwrap(), FieldSpec::rationals());
        assert_eq!("GF(7)".parse::<FieldSpec>().unwrap(), FieldSpec::prime(7).unwrap());
        assert_eq!("11".parse::<FieldSpec>().unwrap(), FieldSpec::prime(11).unwrap());
        assert!("GF(9)".parse::<FieldSpec>().is_err());
        assert!("GF(3)".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn parse_and_format_fractions() {
        let q = Rationals;
        let v = q.parse("-193/4").unwrap();
        assert_eq!(q.format(&v), "-193/4");
        assert_eq!(q.format(&q.parse("6/3").unwrap()), "2");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn prime_field_rules() {
        assert!(PrimeField::new(3).is_err());
        assert!(PrimeField::new(9).is_err());
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.parse("-1/2").unwrap(), 3);
        assert_eq!(f.lift(6), -1);
    }

    #[test]
    fn residue_of_rationals() {
        let q = Rationals;
        let v = q.parse("-193/4").unwrap();
        let r = q.residue(&v, 7).unwrap();
        assert_eq!((r * 4) % 7, (7 - 193 % 7) % 7);
        assert_eq!(q.residue(&q.parse("1/35").unwrap(), 5), None);
    }
}
