//! The coefficient-field abstraction shared by every algebraic container in the crate.
//!
//! All containers ([`Poly`](crate::Poly), [`LocFrac`](crate::LocFrac),
//! [`SkewOperator`](crate::SkewOperator), ...) are generic over a [`Field`]. Two
//! exact implementations are provided: [`BigRational`] for numeric work and
//! [`RatFunc`](crate::RatFunc) for the formal parameter field Q(c). Floating point
//! types deliberately do not implement the trait.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_bigint(v: BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(BigInt::from(v))
    }

    fn from_rational(r: &BigRational) -> Self {
        Self::from_bigint(r.numer().clone()) / Self::from_bigint(r.denom().clone())
    }

    /// `Some(q)` when the element is the rational constant `q`.
    fn as_rational(&self) -> Option<BigRational>;

    fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Splits off a leading minus sign when the element renders as a single signed
    /// product (a negative rational, `-3/2*c^2`, ...). Returns `(negative, magnitude)`.
    fn split_sign(&self) -> (bool, Self) {
        match self.as_rational() {
            Some(r) if r.is_negative() => (true, -self.clone()),
            _ => (false, self.clone()),
        }
    }

    /// True when `Display` output is a product of factors with no top-level `+`/`-`,
    /// so the element can be placed in a product without parentheses.
    fn is_atomic(&self) -> bool {
        self.as_rational().is_some_and(|r| !r.is_negative())
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

impl Field for BigRational {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_bigint(v: BigInt) -> Self {
        BigRational::from_integer(v)
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Binomial coefficient as an exact big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Parses `p` or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(6, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("-3/6"),
            Some(BigRational::new((-1).into(), 2.into()))
        );
        assert_eq!(parse_rational("5"), Some(BigRational::from_integer(5.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
