//! Exact arithmetic in Q(c), rational functions in one formal parameter `c`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense univariate polynomial in `c` with integer coefficients, lowest degree first.
/// Trailing zeros are always trimmed, so the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn constant(v: BigInt) -> Self {
        Self::new(vec![v])
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.0.last()
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn div_scalar_exact(&self, d: &BigInt) -> Self {
        IntPoly(self.0.iter().map(|c| c / d).collect())
    }

    fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return IntPoly::default();
        }
        IntPoly(self.0.iter().map(|c| c * k).collect())
    }

    /// Primitive part with positive leading coefficient.
    fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        self.div_scalar_exact(&g)
    }

    fn add(&self, rhs: &Self) -> Self {
        let len = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.0.get(i);
            let b = rhs.0.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        IntPoly::new(out)
    }

    fn neg(&self) -> Self {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Pseudo-remainder `lc(rhs)^(deg self - deg rhs + 1) * self mod rhs`.
    fn pseudo_rem(&self, rhs: &Self) -> Self {
        let mut r = self.clone();
        let d = rhs.degree();
        let lc = rhs.leading().expect("nonzero divisor").clone();
        while r.degree() >= d {
            let shift = (r.degree() - d) as usize;
            let lr = r.leading().unwrap().clone();
            r = r.scale(&lc);
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(rhs.0.iter().map(|c| c * &lr));
            r = r.sub(&IntPoly::new(sub));
        }
        r
    }

    /// Greatest common divisor over Q, returned primitive with positive leading coefficient.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = rhs.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// Exact quotient `self / rhs` when `rhs` is primitive and divides `self` over Q.
    fn div_exact(&self, rhs: &Self) -> Self {
        if rhs.is_one() {
            return self.clone();
        }
        let d = rhs.degree();
        let lc = rhs.leading().expect("nonzero divisor");
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); (self.degree() - d + 1).max(0) as usize];
        while !r.is_zero() && r.degree() >= d {
            let shift = (r.degree() - d) as usize;
            let (t, rem) = r.leading().unwrap().div_rem(lc);
            debug_assert!(rem.is_zero(), "inexact polynomial division");
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(rhs.0.iter().map(|c| c * &t));
            q[shift] = t;
            r = r.sub(&IntPoly::new(sub));
        }
        debug_assert!(r.is_zero(), "inexact polynomial division");
        IntPoly::new(q)
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * at + BigRational::from_integer(c.clone()))
    }

    fn fmt_scaled(&self, den: &BigInt, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = BigRational::new(c.clone(), den.clone());
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "c")?;
                    } else {
                        write!(f, "c^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// An element of Q(c), kept in a canonical form so that equality is structural.
///
/// Canonical form: `num` and `den` have integer coefficients, are coprime over Q,
/// `den` has a positive leading coefficient, and the integer contents of `num` and
/// `den` are coprime. Zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    /// Builds the canonical representative of `num / den`.
    pub fn normalize(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (mut num, mut den) = if den.degree() == 0 {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.div_exact(&g), den.div_exact(&g))
        };
        let g = num.content().gcd(&den.content());
        if !g.is_one() {
            num = num.div_scalar_exact(&g);
            den = den.div_scalar_exact(&g);
        }
        if den.leading().is_some_and(|l| l.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        Ok(RatFunc { num, den })
    }

    /// The formal parameter `c`.
    pub fn param() -> Self {
        RatFunc {
            num: IntPoly::from_i64s(&[0, 1]),
            den: IntPoly::from_i64s(&[1]),
        }
    }

    pub fn from_poly(num: IntPoly) -> Self {
        Self::normalize(num, IntPoly::from_i64s(&[1])).expect("unit denominator")
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    /// Specializes `c` to the rational `at`.
    pub fn evaluate_at(&self, at: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::PoleAtSpecialization { at: at.to_string() });
        }
        Ok(self.num.eval(at) / d)
    }

    /// Composition `c ↦ s`, i.e. returns `self(s)`.
    pub fn substitute(&self, s: &RatFunc) -> Result<RatFunc> {
        let horner = |p: &IntPoly| {
            p.coeffs().iter().rev().fold(RatFunc::zero(), |acc, c| {
                acc.mul_ref(s).add_ref(&RatFunc::from_bigint(c.clone()))
            })
        };
        let d = horner(&self.den);
        let inv = d.inv().ok_or(Error::DivisionByZero)?;
        Ok(horner(&self.num).mul_ref(&inv))
    }

    fn num_is_monomial(&self) -> bool {
        self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
    }

    fn from_raw(num: IntPoly, den: IntPoly) -> Self {
        Self::normalize(num, den).expect("nonzero denominator")
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: IntPoly::default(),
            den: IntPoly::from_i64s(&[1]),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc {
            num: IntPoly::from_i64s(&[1]),
            den: IntPoly::from_i64s(&[1]),
        }
    }
}

impl Field for RatFunc {
    fn add_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc {
                num: self.num.add(&rhs.num),
                den: self.den.clone(),
            };
        }
        if self.den == rhs.den {
            return Self::from_raw(self.num.add(&rhs.num), self.den.clone());
        }
        Self::from_raw(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&-rhs.clone())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc {
                num: self.num.mul(&rhs.num),
                den: self.den.clone(),
            };
        }
        Self::from_raw(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_raw(self.den.clone(), self.num.clone()))
    }

    fn from_bigint(v: BigInt) -> Self {
        Self::from_raw(IntPoly::constant(v), IntPoly::from_i64s(&[1]))
    }

    fn from_rational(r: &BigRational) -> Self {
        Self::from_raw(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
    }

    fn as_rational(&self) -> Option<BigRational> {
        if self.num.degree() <= 0 && self.den.degree() == 0 {
            let n = self.num.coeffs().first().cloned().unwrap_or_default();
            Some(BigRational::new(n, self.den.coeffs()[0].clone()))
        } else {
            None
        }
    }

    fn split_sign(&self) -> (bool, Self) {
        if self.den.degree() == 0
            && self.num_is_monomial()
            && self.num.leading().is_some_and(|l| l.is_negative())
        {
            (true, -self.clone())
        } else {
            (false, self.clone())
        }
    }

    fn is_atomic(&self) -> bool {
        self.den.degree() == 0
            && self.num_is_monomial()
            && !self.num.leading().is_some_and(|l| l.is_negative())
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        self.add_ref(&rhs)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        self.sub_ref(&rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        self.mul_ref(&rhs)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero, like the integer types.
    fn div(self, rhs: RatFunc) -> RatFunc {
        let inv = rhs.inv().expect("division by zero in Q(c)");
        self.mul_ref(&inv)
    }
}

impl From<i64> for RatFunc {
    fn from(v: i64) -> Self {
        Self::from_i64(v)
    }
}

impl fmt::Display for RatFunc {
    /// Ascending powers of `c`; a non-constant denominator is written as a
    /// negative power so the output stays inside the expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == 0 {
            return self.num.fmt_scaled(&self.den.coeffs()[0], f);
        }
        let one = BigInt::one();
        write!(f, "(")?;
        self.num.fmt_scaled(&one, f)?;
        write!(f, ")*(")?;
        self.den.fmt_scaled(&one, f)?;
        write!(f, ")^-1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalize_examples() {
        let a = RatFunc::normalize(p(&[2, 2]), p(&[2])).unwrap();
        assert_eq!(a, RatFunc::from_poly(p(&[1, 1])));
        let b = RatFunc::normalize(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(b, RatFunc::from_poly(p(&[1, 1])));
        let z = RatFunc::normalize(p(&[]), p(&[5, 0, 0, 1])).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.denominator(), &p(&[1]));
        assert_eq!(
            RatFunc::normalize(p(&[1]), p(&[])),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn normalize_sign_and_content() {
        // (2c)/(-4c - 4) = -c / (2c + 2)
        let a = RatFunc::normalize(p(&[0, 2]), p(&[-4, -4])).unwrap();
        assert_eq!(a.numerator(), &p(&[0, -1]));
        assert_eq!(a.denominator(), &p(&[2, 2]));
        // 1/2 keeps the constant in the denominator
        let h = RatFunc::from_rational(&q(1, 2));
        assert_eq!(h.numerator(), &p(&[1]));
        assert_eq!(h.denominator(), &p(&[2]));
    }

    #[test]
    fn evaluate_examples() {
        let c = RatFunc::param();
        let s = c.clone() + RatFunc::one();
        assert_eq!(s.evaluate_at(&q(1, 2)).unwrap(), q(3, 2));
        let pole = RatFunc::one() / (c.clone() - RatFunc::one());
        assert!(matches!(
            pole.evaluate_at(&q(1, 1)),
            Err(Error::PoleAtSpecialization { .. })
        ));
        let cancel = RatFunc::normalize(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(cancel.evaluate_at(&q(1, 1)).unwrap(), q(2, 1));
    }

    #[test]
    fn display() {
        let c = RatFunc::param();
        assert_eq!((RatFunc::one() - c.clone()).to_string(), "1 - c");
        assert_eq!((c.clone() * c.clone() * RatFunc::from_i64(-3)).to_string(), "-3*c^2");
        assert_eq!(RatFunc::from_rational(&q(-1, 2)).to_string(), "-1/2");
        let r = c.clone() / (c.clone() + RatFunc::one());
        assert_eq!(r.to_string(), "(c)*(1 + c)^-1");
    }

    #[test]
    fn substitution() {
        let c = RatFunc::param();
        let w = c.clone() * (c.clone() + RatFunc::one());
        let flipped = -c.clone() - RatFunc::one();
        assert_eq!(w.substitute(&flipped).unwrap(), w);
        let inv = RatFunc::one() / c.clone();
        assert_eq!(
            inv.substitute(&(c.clone() + RatFunc::one())).unwrap(),
            RatFunc::one() / (c + RatFunc::one())
        );
    }

    #[test]
    fn gcd_cancellation_in_sums() {
        let c = RatFunc::param();
        let one = RatFunc::one();
        // 1/(c-1) - 1/(c+1) = 2/(c^2-1)
        let s = one.clone() / (c.clone() - one.clone()) - one.clone() / (c.clone() + one.clone());
        assert_eq!(s.numerator(), &p(&[2]));
        assert_eq!(s.denominator(), &p(&[-1, 0, 1]));
        // (c^2-1)/(c-1) - c = 1
        let t = RatFunc::normalize(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap() - c;
        assert_eq!(t, one);
    }
}
