//! Polynomials over a field in commuting variables `x1..xn, y1..yn`, with the
//! diagonal S_n action and the bigrading by (x-degree, y-degree).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::perm::Perm;

pub type Exps = SmallVec<[u16; 8]>;

/// Which variable family: coordinates `x` or symbol variables `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    X,
    Y,
}

/// Exponents of `x1..xn` followed by `y1..yn`.
///
/// Ordered graded-lexicographically: x-degree first, then y-degree, then
/// lexicographically on the full exponent list (`x1` is the largest variable).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exps,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, 2 * n),
        }
    }

    pub fn new(x: &[u16], y: &[u16]) -> Self {
        debug_assert_eq!(x.len(), y.len());
        let mut exps = Exps::new();
        exps.extend_from_slice(x);
        exps.extend_from_slice(y);
        Monomial { exps }
    }

    pub fn from_exps(exps: Exps) -> Self {
        debug_assert!(exps.len().is_multiple_of(2));
        Monomial { exps }
    }

    pub fn n(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn x(&self) -> &[u16] {
        &self.exps[..self.n()]
    }

    pub fn y(&self) -> &[u16] {
        &self.exps[self.n()..]
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn x_degree(&self) -> u32 {
        self.x().iter().map(|&e| e as u32).sum()
    }

    pub fn y_degree(&self) -> u32 {
        self.y().iter().map(|&e| e as u32).sum()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.x_degree(), self.y_degree())
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&rhs.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, rhs: &Monomial) -> bool {
        self.exps.iter().zip(&rhs.exps).all(|(a, b)| a <= b)
    }

    /// `rhs / self`, assuming `self` divides `rhs`.
    pub fn quotient_of(&self, rhs: &Monomial) -> Monomial {
        Monomial {
            exps: rhs.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect(),
        }
    }

    /// Diagonal action: `x_i ↦ x_{w(i)}`, `y_i ↦ y_{w(i)}`.
    pub fn act(&self, w: &Perm) -> Monomial {
        let n = self.n();
        let mut exps: Exps = SmallVec::from_elem(0, 2 * n);
        for i in 0..n {
            let j = w.apply(i);
            exps[j] = self.exps[i];
            exps[n + j] = self.exps[n + i];
        }
        Monomial { exps }
    }

    pub(crate) fn fmt_factors(&self, out: &mut Vec<String>) {
        let n = self.n();
        for (k, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = if k < n {
                format!("x{}", k + 1)
            } else {
                format!("y{}", k - n + 1)
            };
            if e == 1 {
                out.push(name);
            } else {
                out.push(format!("{name}^{e}"));
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bidegree()
            .cmp(&other.bidegree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of length `len` with entries summing to `deg`.
pub fn compositions(len: usize, deg: u32) -> Vec<SmallVec<[u16; 8]>> {
    let mut out = Vec::new();
    let mut cur: SmallVec<[u16; 8]> = SmallVec::from_elem(0, len);
    fn rec(pos: usize, left: u32, cur: &mut SmallVec<[u16; 8]>, out: &mut Vec<SmallVec<[u16; 8]>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u16;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[pos] = k as u16;
            rec(pos + 1, left - k, cur, out);
        }
        cur[pos] = 0;
    }
    if len == 0 {
        if deg == 0 {
            out.push(SmallVec::new());
        }
        return out;
    }
    rec(0, deg, &mut cur, &mut out);
    out
}

/// Every monomial of bidegree `(i, j)` in `n` variables per family.
pub fn monomials_of_bidegree(n: usize, i: u32, j: u32) -> Vec<Monomial> {
    let xs = compositions(n, i);
    let ys = compositions(n, j);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for a in &xs {
        for b in &ys {
            out.push(Monomial::new(a, b));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<K: Field> {
    n: usize,
    terms: BTreeMap<Monomial, K>,
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring arithmetic on two polynomials of the same arity.
pub fn poly_arith<K: Field>(p: &Poly<K>, q: &Poly<K>, op: PolyOp) -> Result<Poly<K>> {
    p.check_arity(q)?;
    Ok(match op {
        PolyOp::Add => p.add(q),
        PolyOp::Sub => p.sub(q),
        PolyOp::Mul => p.mul(q),
    })
}

impl<K: Field> Poly<K> {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: K) -> Self {
        Self::monomial(n, Monomial::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, K::one())
    }

    pub fn monomial(n: usize, m: Monomial, c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { n, terms }
    }

    /// The variable `x_i` or `y_i` (1-based).
    pub fn var(n: usize, family: Family, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let mut exps: Exps = SmallVec::from_elem(0, 2 * n);
        let slot = match family {
            Family::X => i - 1,
            Family::Y => n + i - 1,
        };
        exps[slot] = 1;
        Ok(Self::monomial(n, Monomial { exps }, K::one()))
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::var(n, Family::X, i).expect("index in range")
    }

    pub fn y(n: usize, i: usize) -> Self {
        Self::var(n, Family::Y, i).expect("index in range")
    }

    /// `x_i - x_j` for 0-based `i`, `j`.
    pub(crate) fn linear_root(n: usize, i: usize, j: usize) -> Self {
        let mut a: Exps = SmallVec::from_elem(0, 2 * n);
        a[i] = 1;
        let mut b: Exps = SmallVec::from_elem(0, 2 * n);
        b[j] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial { exps: a }, K::one());
        terms.insert(Monomial { exps: b }, -K::one());
        Poly { n, terms }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            debug_assert_eq!(m.n(), n);
            p.add_term(m, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &K)> {
        self.terms.iter().next_back()
    }

    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|m| m.y_degree() == 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn check_arity(&self, rhs: &Self) -> Result<()> {
        if self.n != rhs.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: rhs.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul_ref(k)))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "arity mismatch");
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.mul_ref(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i` or `y_i` (1-based).
    pub fn partial_derivative(&self, family: Family, i: usize) -> Result<Self> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        let slot = match family {
            Family::X => i - 1,
            Family::Y => self.n + i - 1,
        };
        Ok(self.derivative_slot(slot))
    }

    pub(crate) fn derivative_slot(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.exps[slot];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[slot] -= 1;
            out.add_term(Monomial { exps }, c.mul_ref(&K::from_i64(e as i64)));
        }
        out
    }

    /// Diagonal action `(w·p)(v) = p(w⁻¹ v)`, i.e. `x_i ↦ x_{w(i)}` and `y_i ↦ y_{w(i)}`.
    pub fn act(&self, w: &Perm) -> Self {
        assert_eq!(w.n(), self.n, "arity mismatch");
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.act(w), c.clone())).collect(),
        }
    }

    /// Checked version of [`Poly::act`].
    pub fn group_act(&self, w: &Perm) -> Result<Self> {
        if w.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: w.n(),
            });
        }
        Ok(self.act(w))
    }

    /// Splits into bihomogeneous components, in increasing bidegree order.
    pub fn bidegree_components(&self) -> Vec<((u32, u32), Poly<K>)> {
        let mut parts: BTreeMap<(u32, u32), Poly<K>> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.bidegree())
                .or_insert_with(|| Self::zero(self.n))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Multivariate division by a single divisor in graded-lex order. Returns
    /// `(quotient, remainder)` with `self = quotient * divisor + remainder`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert_eq!(self.n, divisor.n, "arity mismatch");
        let (lm, lc) = divisor.leading_term().expect("division by the zero polynomial");
        let lc_inv = lc.inv().expect("nonzero leading coefficient");
        let mut rest = self.clone();
        let mut quot = Self::zero(self.n);
        let mut rem = Self::zero(self.n);
        while let Some((m, c)) = rest.terms.pop_last() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = c.mul_ref(&lc_inv);
                for (dm, dc) in divisor.terms.iter().rev().skip(1) {
                    rest.add_term(dm.mul(&qm), -(dc.mul_ref(&qc)));
                }
                quot.add_term(qm, qc);
            } else {
                rem.terms.insert(m, c);
            }
        }
        (quot, rem)
    }

    /// `Some(self / divisor)` when the division is exact.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Multiplies by `x_i - x_j` (0-based indices).
    pub(crate) fn mul_root(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut a = m.exps.clone();
            a[i] += 1;
            out.add_term(Monomial { exps: a }, c.clone());
            let mut b = m.exps.clone();
            b[j] += 1;
            out.add_term(Monomial { exps: b }, -c.clone());
        }
        out
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn try_map_coeffs<L: Field>(
        &self,
        mut f: impl FnMut(&K) -> Result<L>,
    ) -> Result<Poly<L>> {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Homogeneous components by x-degree.
    pub fn x_components(&self) -> BTreeMap<u32, Poly<K>> {
        let mut parts: BTreeMap<u32, Poly<K>> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.x_degree())
                .or_insert_with(|| Self::zero(self.n))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts
    }

    pub fn total_x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x_degree()).max()
    }
}

/// The discriminant `Π_{i<j} (x_i - x_j)`.
pub fn discriminant<K: Field>(n: usize) -> Poly<K> {
    let mut d = Poly::one(n);
    for i in 0..n {
        for j in i + 1..n {
            d = d.mul_root(i, j);
        }
    }
    d
}

/// Degree of the discriminant, `n(n-1)/2`.
pub fn discriminant_degree(n: usize) -> u32 {
    (n * (n - 1) / 2) as u32
}

pub(crate) fn fmt_term<K: Field>(
    coeff: &K,
    factors: &[String],
    first: bool,
    out: &mut String,
) {
    let (neg, mag) = coeff.split_sign();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if factors.is_empty() {
        if first && !neg || mag.is_atomic() {
            out.push_str(&mag.to_string());
        } else {
            out.push_str(&format!("({mag})"));
        }
        return;
    }
    if !mag.is_one() {
        if mag.is_atomic() {
            out.push_str(&mag.to_string());
        } else {
            out.push_str(&format!("({mag})"));
        }
        out.push('*');
    }
    out.push_str(&factors.join("*"));
}

impl<K: Field> fmt::Display for Poly<K> {
    /// Terms in decreasing graded-lex order, e.g. `x1^2 - 2*x1*x2 + x2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let single = self.terms.len() == 1;
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut factors = Vec::new();
            m.fmt_factors(&mut factors);
            if single && factors.is_empty() {
                out.push_str(&c.to_string());
            } else {
                fmt_term(c, &factors, k == 0, &mut out);
            }
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_perms;
    use num_rational::BigRational;

    type P = Poly<BigRational>;

    fn x(n: usize, i: usize) -> P {
        P::x(n, i)
    }

    #[test]
    fn arithmetic_examples() {
        let (x1, x2) = (x(2, 1), x(2, 2));
        let prod = x1.add(&x2).mul(&x1.sub(&x2));
        assert_eq!(prod, x1.mul(&x1).sub(&x2.mul(&x2)));
        assert!(prod.mul(&P::zero(2)).is_zero());
        let sq = x1.sub(&x2).pow(2);
        assert_eq!(sq.to_string(), "x1^2 - 2*x1*x2 + x2^2");
        assert!(matches!(
            poly_arith(&x1, &x(3, 1), PolyOp::Mul),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        let (x1, x2, y1) = (x(2, 1), x(2, 2), P::y(2, 1));
        let p = x1.mul(&x1).mul(&x2);
        assert_eq!(
            p.partial_derivative(Family::X, 1).unwrap(),
            x1.mul(&x2).scale(&BigRational::from_integer(2.into()))
        );
        assert!(x1.partial_derivative(Family::X, 2).unwrap().is_zero());
        let q = x1.mul(&y1).mul(&y1);
        assert_eq!(
            q.partial_derivative(Family::Y, 1).unwrap(),
            x1.mul(&y1).scale(&BigRational::from_integer(2.into()))
        );
        assert!(matches!(
            q.partial_derivative(Family::Y, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn group_action_examples() {
        let s = Perm::transposition(2, 1, 2).unwrap();
        let d = x(2, 1).sub(&x(2, 2));
        assert_eq!(d.act(&s), d.neg());
        let m = x(2, 1).mul(&P::y(2, 2));
        assert_eq!(m.act(&s), x(2, 2).mul(&P::y(2, 1)));
        assert_eq!(m.act(&Perm::identity(2)), m);
    }

    #[test]
    fn discriminant_is_sign_semi_invariant() {
        for n in 2..=4 {
            let d = discriminant::<BigRational>(n);
            for w in all_perms(n) {
                let expected = if w.is_even() { d.clone() } else { d.neg() };
                assert_eq!(d.act(&w), expected, "n = {n}, w = {w}");
            }
        }
    }

    #[test]
    fn bidegree_components_examples() {
        let p = x(2, 1).add(&P::y(2, 1).pow(2));
        let parts = p.bidegree_components();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, (0, 2));
        assert_eq!(parts[1].0, (1, 0));
        assert!(P::zero(2).bidegree_components().is_empty());
        let q = x(2, 1).mul(&P::y(2, 1)).add(&x(2, 2).mul(&P::y(2, 2)));
        assert_eq!(q.bidegree_components(), vec![((1, 1), q.clone())]);
    }

    #[test]
    fn exact_division() {
        let d = discriminant::<BigRational>(3);
        let p = d.mul(&x(3, 1).add(&x(3, 3)));
        assert_eq!(p.div_exact(&d), Some(x(3, 1).add(&x(3, 3))));
        assert_eq!(x(3, 1).div_exact(&d), None);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(compositions(2, 0).len(), 1);
        assert_eq!(monomials_of_bidegree(2, 1, 1).len(), 4);
    }
}
