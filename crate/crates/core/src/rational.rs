//! Rational numbers stored as a pair of machine integers when they fit,
//! falling back to arbitrary precision otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Canonical form: `Small(n, d)` with `gcd(n, d) = 1`, `d >= 1` and both
/// strictly inside the `i64` range; `Big` only for values that do not fit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn fits(v: i128) -> Option<i64> {
    if v > i64::MIN as i128 && v <= i64::MAX as i128 {
        Some(v as i64)
    } else {
        None
    }
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn one() -> Self {
        Rational::Small(1, 1)
    }

    pub fn from_i64(v: i64) -> Self {
        if v == i64::MIN {
            Rational::Big(Box::new(BigRational::from_integer(BigInt::from(v))))
        } else {
            Rational::Small(v, 1)
        }
    }

    fn from_i128(n: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        let g = n.gcd(&d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (fits(n), fits(d)) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn from_big(v: BigRational) -> Self {
        match (v.numer().to_i128().and_then(fits), v.denom().to_i128().and_then(fits)) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(v)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(v) => (**v).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(v) => v.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(v) => v.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(v) => v.denom().clone(),
        }
    }

    /// Rough size in bits, used to prefer small pivots.
    pub fn height(&self) -> u64 {
        match self {
            Rational::Small(n, d) => u64::from(128 - n.unsigned_abs().leading_zeros() - d.leading_zeros()),
            Rational::Big(v) => v.numer().bits() + v.denom().bits(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Rational::Small(0, _), _) => other.clone(),
            (_, Rational::Small(0, _)) => self.clone(),
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if b == d {
                    Self::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let g = (*b).gcd(d) as i128;
                    let (b, d) = (*b as i128, *d as i128);
                    Self::from_i128(*a as i128 * (d / g) + *c as i128 * (b / g), b / g * d)
                }
            }
            _ => Self::from_big(self.to_big() + other.to_big()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Rational::Small(n, d) => Rational::Small(-n, *d),
            Rational::Big(v) => Self::from_big(-&**v),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Rational::Small(0, _), _) | (_, Rational::Small(0, _)) => Rational::zero(),
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let g1 = a.gcd(d);
                let g2 = c.gcd(b);
                let n = (a / g1) as i128 * (c / g2) as i128;
                let m = (b / g2) as i128 * (d / g1) as i128;
                match (fits(n), fits(m)) {
                    (Some(n), Some(m)) => Rational::Small(n, m),
                    _ => Rational::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(m)))),
                }
            }
            _ => Self::from_big(self.to_big() * other.to_big()),
        }
    }

    pub fn recip(&self) -> Option<Self> {
        match self {
            Rational::Small(0, _) => None,
            Rational::Small(n, d) => Some(if *n < 0 { Rational::Small(-d, -n) } else { Rational::Small(*d, *n) }),
            Rational::Big(v) => Some(Self::from_big(v.recip())),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rational::Small(n, _) => n.signum() as i32,
            Rational::Big(v) => {
                if v.is_negative() {
                    -1
                } else if v.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(v) if v.denom().is_one() => write!(f, "{}", v.numer()),
            Rational::Big(v) => write!(f, "{}/{}", v.numer(), v.denom()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stays_three_words() {
        assert!(std::mem::size_of::<Rational>() <= 24);
    }
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let a = Rational::from_i64(i64::MAX);
        let s = a.add(&a);
        assert!(matches!(s, Rational::Big(_)));
        assert_eq!(s.sub(&a), a);
        assert!(matches!(s.sub(&a), Rational::Small(..)));
        assert_eq!(Rational::from_i64(i64::MIN).neg().to_big(), -BigRational::from_integer(BigInt::from(i64::MIN)));
    }

    proptest! {
        #[test]
        fn agrees_with_big_rationals(a in -1i64<<40..1i64<<40, b in 1i64..1<<30, c in i64::MIN/2..i64::MAX/2, d in 1i64..i64::MAX) {
            let (x, y) = (Rational::from_big(big(a, b)), Rational::from_big(big(c, d)));
            prop_assert_eq!(x.add(&y), Rational::from_big(big(a, b) + big(c, d)));
            prop_assert_eq!(x.sub(&y), Rational::from_big(big(a, b) - big(c, d)));
            prop_assert_eq!(x.mul(&y), Rational::from_big(big(a, b) * big(c, d)));
            if c != 0 {
                prop_assert_eq!(y.recip().unwrap(), Rational::from_big(big(c, d).recip()));
            }
            prop_assert_eq!(x.mul(&y).to_big(), big(a, b) * big(c, d));
        }
    }
}
