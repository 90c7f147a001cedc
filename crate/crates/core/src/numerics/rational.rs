use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always held in canonical form
/// (positive denominator, reduced).
///
/// Serializes as the string `"p/q"` in all JSON interfaces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` from machine integers. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Invalid("division by zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact conversion of a finite `f64` (every finite float is a dyadic
    /// rational).
    pub fn from_f64_exact(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Rational)
            .ok_or_else(|| Error::Parse(format!("non-finite float {x}")))
    }

    /// Parses a plain decimal string such as `"0.25"`, `"1"`, or `"-3.5e-2"`
    /// into the exact rational it denotes.
    pub fn parse_decimal(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mantissa, exp10) = match s.find(['e', 'E']) {
            Some(pos) => {
                let exp: i64 = s[pos + 1..]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
                (&s[..pos], exp)
            }
            None => (s, 0),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
            None => (mantissa, ""),
        };
        let digits = format!("{int_part}{frac_part}");
        if digits.is_empty() || digits == "-" || digits == "+" {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let numer =
            BigInt::from_str(&digits).map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let shift = frac_part.len() as i64 - exp10;
        let ten = BigInt::from(10);
        let value = if shift >= 0 {
            BigRational::new(numer, ten.pow(shift as u32))
        } else {
            BigRational::from_integer(numer * ten.pow((-shift) as u32))
        };
        Ok(Rational(value))
    }

    /// Best rational approximation with denominator at most `max_denominator`,
    /// via the continued-fraction convergents (with a final semiconvergent).
    pub fn approximate_with_denominator(&self, max_denominator: u64) -> Result<Self> {
        if max_denominator == 0 {
            return Err(Error::Invalid("denominator bound must be positive".into()));
        }
        let bound = BigInt::from(max_denominator);
        if *self.denom() <= bound {
            return Ok(self.clone());
        }
        // Convergents h_k/k_k of the continued fraction of self.
        let mut h_prev = BigInt::one();
        let mut h_prev2 = BigInt::zero();
        let mut k_prev = BigInt::zero();
        let mut k_prev2 = BigInt::one();
        let mut x = self.0.clone();
        loop {
            let a = x.floor().to_integer();
            let h = &a * &h_prev + &h_prev2;
            let k = &a * &k_prev + &k_prev2;
            if k > bound {
                // Largest semiconvergent with denominator within the bound.
                let a_cut = (&bound - &k_prev2) / &k_prev;
                let cand = if a_cut.is_zero() {
                    None
                } else {
                    Some(BigRational::new(
                        &a_cut * &h_prev + &h_prev2,
                        &a_cut * &k_prev + &k_prev2,
                    ))
                };
                let prev = BigRational::new(h_prev.clone(), k_prev.clone());
                let best = match cand {
                    Some(c) => {
                        let dc = (&c - &self.0).abs();
                        let dp = (&prev - &self.0).abs();
                        // Tie breaks toward the smaller denominator.
                        if dc < dp {
                            c
                        } else {
                            prev
                        }
                    }
                    None => prev,
                };
                return Ok(Rational(best));
            }
            let frac = &x - BigRational::from_integer(a);
            h_prev2 = std::mem::replace(&mut h_prev, h);
            k_prev2 = std::mem::replace(&mut k_prev, k);
            if frac.is_zero() {
                return Ok(Rational(BigRational::new(h_prev, k_prev)));
            }
            x = frac.recip();
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"p/q"` or a bare integer `"p"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let numer = BigInt::from_str(p.trim())
                    .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                let denom = BigInt::from_str(q.trim())
                    .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                Rational::new(numer, denom)
            }
            None => {
                let numer =
                    BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                Ok(Rational::from_bigint(numer))
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rational::from_str(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = Rational::ratio(2, -4);
        assert_eq!(r.to_string(), "-1/2");
        assert_eq!(Rational::ratio(6, 3), Rational::from_int(2));
    }

    #[test]
    fn exact_arithmetic() {
        let a = Rational::ratio(1, 3);
        let b = Rational::ratio(1, 6);
        assert_eq!(&a + &b, Rational::ratio(1, 2));
        assert_eq!(&a - &b, Rational::ratio(1, 6));
        assert_eq!(&a * &b, Rational::ratio(1, 18));
        assert_eq!(&a / &b, Rational::from_int(2));
    }

    #[test]
    fn parse_roundtrip() {
        let r: Rational = "-7/3".parse().unwrap();
        assert_eq!(r, Rational::ratio(-7, 3));
        let i: Rational = "5".parse().unwrap();
        assert_eq!(i, Rational::from_int(5));
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn parse_decimal_exact() {
        assert_eq!(
            Rational::parse_decimal("0.25").unwrap(),
            Rational::ratio(1, 4)
        );
        assert_eq!(
            Rational::parse_decimal("-1.5").unwrap(),
            Rational::ratio(-3, 2)
        );
        assert_eq!(
            Rational::parse_decimal("2e-2").unwrap(),
            Rational::ratio(1, 50)
        );
        assert_eq!(Rational::parse_decimal("3").unwrap(), Rational::from_int(3));
    }

    #[test]
    fn approximate_pi() {
        let pi = Rational::parse_decimal("3.14159265358979").unwrap();
        assert_eq!(
            pi.approximate_with_denominator(10).unwrap(),
            Rational::ratio(22, 7)
        );
        assert_eq!(
            pi.approximate_with_denominator(150).unwrap(),
            Rational::ratio(355, 113)
        );
    }

    #[test]
    fn approximate_keeps_exact_values() {
        let half = Rational::ratio(1, 2);
        assert_eq!(half.approximate_with_denominator(10).unwrap(), half);
    }

    #[test]
    fn serde_string_form() {
        let r = Rational::ratio(3, 7);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "\"3/7\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn float_conversion() {
        assert_eq!(
            Rational::from_f64_exact(0.5).unwrap(),
            Rational::ratio(1, 2)
        );
        assert!((Rational::ratio(1, 3).to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
