//! Exact rational scalars.
//!
//! Every continuous quantity in the solvers (dual values, grid points, rounding
//! units, objective values) is a [`Rat`]. There is no floating point anywhere
//! on the solver path.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// `num / den`. Panics if `den == 0`.
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    /// Convenience constructor for small literals.
    pub fn ratio(num: i64, den: i64) -> Self {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(v.into()))
    }

    pub fn from_uint(v: &BigUint) -> Self {
        Rat::from_int(BigInt::from(v.clone()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    pub fn ceil(&self) -> BigInt {
        self.numer().div_ceil(self.denom())
    }

    /// `max(self, 0)`.
    pub fn clamp_nonneg(self) -> Self {
        if self.is_negative() {
            Rat::zero()
        } else {
            self
        }
    }

    /// Exact `self^exp` by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Rat::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Lossy conversion for display and timing ratios only.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min_of(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }
}

/// Exact `q^j`.
pub fn rat_pow(q: &Rat, j: u64) -> Rat {
    q.pow(j)
}

/// Exact `⌈a / d⌉` for `a ≥ 0`, `d > 0`.
pub fn ceil_div_rat(a: &Rat, d: &Rat) -> Result<BigUint> {
    if !d.is_positive() {
        return Err(Error::NonPositiveDivisor);
    }
    if a.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "ceil_div_rat numerator must be non-negative, got {a}"
        )));
    }
    // (an/ad) / (dn/dd) = an*dd / (ad*dn)
    let num = a.numer() * d.denom();
    let den = a.denom() * d.numer();
    let q = num.div_ceil(&den);
    Ok(q.to_biguint().expect("non-negative quotient"))
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `"7"`, `"-7"`, `"3/4"`, `"0.125"`, `"-.5"`.
impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedSyntax(format!("not a rational number: {s:?}"));
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());

        let value = if let Some((n, d)) = body.split_once('/') {
            if !digits(n) || !digits(d) {
                return Err(bad());
            }
            let den = BigInt::from_str(d).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Rat::new(BigInt::from_str(n).map_err(|_| bad())?, den)
        } else if let Some((int, frac)) = body.split_once('.') {
            if (int.is_empty() && frac.is_empty())
                || !(int.is_empty() || digits(int))
                || !(frac.is_empty() || digits(frac))
            {
                return Err(bad());
            }
            let int = if int.is_empty() { "0" } else { int };
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_val = if frac.is_empty() {
                BigInt::zero()
            } else {
                BigInt::from_str(frac).map_err(|_| bad())?
            };
            let whole = BigInt::from_str(int).map_err(|_| bad())?;
            Rat::new(whole * &scale + frac_val, scale)
        } else {
            if !digits(body) {
                return Err(bad());
            }
            Rat::from_int(BigInt::from_str(body).map_err(|_| bad())?)
        };
        Ok(if neg { -value } else { value })
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::from_int(v)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Self {
        Rat::from_int(v)
    }
}

impl From<&BigUint> for Rat {
    fn from(v: &BigUint) -> Self {
        Rat::from_uint(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat(&self.0 / &rhs.0)
    }
}

impl Div<Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        &self / &rhs
    }
}

impl<'a> Div<&'a Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        &self / rhs
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// Converts a non-negative integer-valued rational to `BigUint`.
pub(crate) fn to_biguint(v: &BigInt) -> Option<BigUint> {
    match v.sign() {
        Sign::Minus => None,
        _ => v.to_biguint(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let q = Rat::ratio(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Rat::ratio(8, 4).to_string(), "2");
    }

    #[test]
    fn pow_examples() {
        assert_eq!(rat_pow(&r("3/2"), 0), Rat::one());
        assert_eq!(rat_pow(&r("3/2"), 2), r("9/4"));
        assert_eq!(rat_pow(&r("11/10"), 3), r("1331/1000"));
        assert_eq!(rat_pow(&r("-2"), 5), r("-32"));
    }

    #[test]
    fn ceil_div_examples() {
        assert_eq!(
            ceil_div_rat(&r("5/2"), &r("1/3")).unwrap(),
            BigUint::from(8u32)
        );
        assert_eq!(
            ceil_div_rat(&Rat::zero(), &r("7/5")).unwrap(),
            BigUint::zero()
        );
        assert_eq!(ceil_div_rat(&r("4"), &r("2")).unwrap(), BigUint::from(2u32));
        assert_eq!(
            ceil_div_rat(&r("1"), &Rat::zero()),
            Err(Error::NonPositiveDivisor)
        );
        assert_eq!(
            ceil_div_rat(&r("1"), &r("-1")),
            Err(Error::NonPositiveDivisor)
        );
    }

    #[test]
    fn parse_forms() {
        assert_eq!(r("0.5"), Rat::ratio(1, 2));
        assert_eq!(r(".25"), Rat::ratio(1, 4));
        assert_eq!(r("1."), Rat::one());
        assert_eq!(r("-0.1"), Rat::ratio(-1, 10));
        assert_eq!(r("10/4"), Rat::ratio(5, 2));
        assert_eq!(r(" 3 "), Rat::from(3));
        for bad in ["", ".", "1/0", "a", "1e3", "1/2/3", "--1", "0x10", "1.2.3"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(Rat::ratio(-7, 2).floor(), BigInt::from(-4));
        assert_eq!(Rat::ratio(-7, 2).ceil(), BigInt::from(-3));
        assert_eq!(Rat::ratio(7, 2).floor(), BigInt::from(3));
        assert_eq!(Rat::ratio(7, 2).ceil(), BigInt::from(4));
    }
}
