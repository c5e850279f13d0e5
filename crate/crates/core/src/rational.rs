//! Arbitrary-precision reduced fractions.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational {0:?}")]
pub struct ParseRationalError(String);

/// A reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    /// `num / q^exp` for unsigned numerators, as produced by degree sums.
    pub fn from_ratio_pow(num: BigUint, q: u32, exp: u32) -> Self {
        let den = BigUint::from(q).pow(exp);
        Self::new(BigInt::from(num), BigInt::from(den))
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

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    pub fn pow(&self, exp: i32) -> Self {
        ExactRational(Pow::pow(&self.0, exp))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal expansion to `places` digits, rounding half to even.
    pub fn to_decimal(&self, places: u32) -> String {
        let neg = self.0.is_negative();
        let num = self.numer().abs();
        let den = self.denom().clone();
        let scale = BigInt::from(10u32).pow(places);
        let (mut q, r) = (num * &scale).div_rem(&den);
        let twice = r * 2;
        if twice > den || (twice == den && q.is_odd()) {
            q += 1;
        }
        let (int, frac) = q.div_rem(&scale);
        let sign = if neg && !(int.is_zero() && frac.is_zero()) {
            "-"
        } else {
            ""
        };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!(
                "{sign}{int}.{:0>width$}",
                frac.to_string(),
                width = places as usize
            )
        }
    }

    /// True if the denominator divides `q^exp`.
    pub fn denominator_divides_power(&self, q: u32, exp: u32) -> bool {
        let pw = BigInt::from(q).pow(exp);
        (pw % self.denom()).is_zero()
    }
}

impl fmt::Display for ExactRational {
    /// Always `num/den`, including `1/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(ExactRational::new(n, d))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::iter::Product for ExactRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |a, b| a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn reduces_on_construction() {
        assert_eq!(ExactRational::new(40, 64), r("5/8"));
        assert_eq!(ExactRational::new(3, -6).to_string(), "-1/2");
        assert_eq!(ExactRational::one().to_string(), "1/1");
    }

    #[test]
    fn decimal_rounding_half_even() {
        assert_eq!(r("5/8").to_decimal(6), "0.625000");
        assert_eq!(r("1/1").to_decimal(6), "1.000000");
        assert_eq!(r("41/128").to_decimal(6), "0.320312"); // 0.3203125 -> even
        assert_eq!(r("35/243").to_decimal(6), "0.144033");
        assert_eq!(r("1/2000000").to_decimal(6), "0.000000");
        assert_eq!(r("3/2000000").to_decimal(6), "0.000002");
        assert_eq!(r("-1/3").to_decimal(3), "-0.333");
    }

    #[test]
    fn parse_errors() {
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("a/2".parse::<ExactRational>().is_err());
        assert_eq!(r("7"), ExactRational::from_integer(7));
    }

    #[test]
    fn denominator_power_check() {
        assert!(r("5/8").denominator_divides_power(2, 3));
        assert!(!r("5/8").denominator_divides_power(2, 2));
        assert!(r("35/243").denominator_divides_power(3, 6));
    }

    proptest::proptest! {
        #[test]
        fn display_round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = ExactRational::new(n, d);
            proptest::prop_assert_eq!(x.to_string().parse::<ExactRational>().unwrap(), x);
        }
    }
}
