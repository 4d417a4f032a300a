//! Normal-form arithmetic in `D(h^reg) # S_n`: sums `f · ∂^a · w` with localized
//! coefficients on the left and group elements on the right.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{binomial, factorial, Field};
use crate::locfrac::LocFrac;
use crate::perm::{all_perms, Perm};
use crate::poly::{fmt_term, Exps, Poly};
use crate::scalar::RatFunc;

/// A basis element `∂^a · w` of the skew ring as a left module over functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpKey {
    d: Exps,
    w: Perm,
}

impl OpKey {
    pub fn new(d: Exps, w: Perm) -> Self {
        OpKey { d, w }
    }

    pub fn derivatives(&self) -> &[u16] {
        &self.d
    }

    pub fn group(&self) -> &Perm {
        &self.w
    }

    pub fn order(&self) -> u32 {
        self.d.iter().map(|&e| e as u32).sum()
    }
}

impl Ord for OpKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| other.d.cmp(&self.d))
            .then_with(|| self.w.cmp(&other.w))
    }
}

impl PartialOrd for OpKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewOperator<K: Field> {
    n: usize,
    terms: BTreeMap<OpKey, LocFrac<K>>,
}

/// Every `β` with `0 ≤ β ≤ a` componentwise.
fn sub_exponents(a: &[u16]) -> Vec<Exps> {
    let mut out: Vec<Exps> = vec![SmallVec::new()];
    for &ai in a {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=ai).map(move |b| {
                    let mut p = prefix.clone();
                    p.push(b);
                    p
                })
            })
            .collect();
    }
    out
}

fn binomial_product<K: Field>(a: &[u16], b: &[u16]) -> K {
    let mut acc = num_bigint::BigInt::one();
    for (&ai, &bi) in a.iter().zip(b) {
        acc *= binomial(ai as u32, bi as u32);
    }
    K::from_bigint(acc)
}

/// Memoized iterated derivatives of one function.
struct DerivativeCache<K: Field> {
    memo: HashMap<Exps, LocFrac<K>>,
}

impl<K: Field> DerivativeCache<K> {
    fn new(f: LocFrac<K>) -> Self {
        let n = f.n();
        let mut memo = HashMap::new();
        memo.insert(SmallVec::from_elem(0, n), f);
        DerivativeCache { memo }
    }

    fn get(&mut self, g: &[u16]) -> LocFrac<K> {
        if let Some(v) = self.memo.get(g) {
            return v.clone();
        }
        let i = g.iter().position(|&e| e > 0).expect("base case is cached");
        let mut lower: Exps = g.iter().copied().collect();
        lower[i] -= 1;
        let v = self.get(&lower).derivative(i);
        self.memo.insert(g.iter().copied().collect(), v.clone());
        v
    }
}

impl<K: Field> SkewOperator<K> {
    pub fn zero(n: usize) -> Self {
        SkewOperator {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_locfrac(LocFrac::one(n))
    }

    pub fn constant(n: usize, c: K) -> Self {
        Self::from_locfrac(LocFrac::constant(n, c))
    }

    /// Multiplication by a function.
    pub fn from_locfrac(f: LocFrac<K>) -> Self {
        let n = f.n();
        let mut out = Self::zero(n);
        out.add_term(OpKey::new(SmallVec::from_elem(0, n), Perm::identity(n)), f);
        out
    }

    pub fn from_poly(p: Poly<K>) -> Result<Self> {
        Ok(Self::from_locfrac(LocFrac::from_poly(p)?))
    }

    /// Multiplication by `x_i` (1-based).
    pub fn x(n: usize, i: usize) -> Result<Self> {
        check_index(i, n)?;
        Ok(Self::from_locfrac(LocFrac::from_poly(Poly::x(n, i))?))
    }

    /// `δ^e`.
    pub fn delta_power(n: usize, e: i64) -> Self {
        Self::from_locfrac(LocFrac::delta_power(n, e))
    }

    /// The plain partial derivative `∂_i` (1-based).
    pub fn partial(n: usize, i: usize) -> Result<Self> {
        check_index(i, n)?;
        let mut d: Exps = SmallVec::from_elem(0, n);
        d[i - 1] = 1;
        let mut out = Self::zero(n);
        out.add_term(OpKey::new(d, Perm::identity(n)), LocFrac::one(n));
        Ok(out)
    }

    pub fn group_element(w: &Perm) -> Self {
        let n = w.n();
        let mut out = Self::zero(n);
        out.add_term(OpKey::new(SmallVec::from_elem(0, n), w.clone()), LocFrac::one(n));
        out
    }

    /// Builds `Σ f ∂^a w` from raw terms, merging duplicates.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (OpKey, LocFrac<K>)>) -> Self {
        let mut out = Self::zero(n);
        for (k, f) in terms {
            out.add_term(k, f);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&OpKey, &LocFrac<K>)> + ExactSizeIterator {
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

    pub fn coeff(&self, key: &OpKey) -> LocFrac<K> {
        self.terms.get(key).cloned().unwrap_or_else(|| LocFrac::zero(self.n))
    }

    pub fn add_term(&mut self, key: OpKey, f: LocFrac<K>) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                let s = c.add(&f);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(key, f);
            }
        }
    }

    fn check_arity(&self, rhs: &Self) -> Result<()> {
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
        let (mut out, other) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (k, f) in &other.terms {
            out.add_term(k.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SkewOperator {
            n: self.n,
            terms: self.terms.iter().map(|(k, f)| (k.clone(), f.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        SkewOperator {
            n: self.n,
            terms: self.terms.iter().map(|(k, f)| (k.clone(), f.scale(c))).collect(),
        }
    }

    /// Left multiplication by a function.
    pub fn mul_locfrac(&self, f: &LocFrac<K>) -> Self {
        let mut out = Self::zero(self.n);
        for (k, g) in &self.terms {
            out.add_term(k.clone(), f.mul(g));
        }
        out
    }

    /// Product of one term `f ∂^a w` with the whole of `rhs`.
    fn term_times(&self, key: &OpKey, f: &LocFrac<K>, rhs: &Self) -> BTreeMap<OpKey, LocFrac<K>> {
        let mut acc = Self::zero(self.n);
        let betas = sub_exponents(&key.d);
        for (rk, g) in &rhs.terms {
            let mut cache = DerivativeCache::new(g.act(&key.w));
            let wb = key.w.permute_exponents(&rk.d);
            let group = key.w.compose(&rk.w);
            for beta in &betas {
                let rest: Exps = key.d.iter().zip(beta).map(|(a, b)| a - b).collect();
                let dg = cache.get(&rest);
                if dg.is_zero() {
                    continue;
                }
                let c = binomial_product::<K>(&key.d, beta);
                let d: Exps = beta.iter().zip(&wb).map(|(b, e)| b + e).collect();
                acc.add_term(OpKey::new(d, group.clone()), f.mul(&dg).scale(&c));
            }
        }
        acc.terms
    }

    /// The skew product, expanded with the Leibniz rule.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "arity mismatch");
        let mut out = Self::zero(self.n);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        let pieces: Vec<BTreeMap<OpKey, LocFrac<K>>> = if self.len() * rhs.len() >= 8 {
            self.terms
                .par_iter()
                .map(|(k, f)| self.term_times(k, f, rhs))
                .collect()
        } else {
            self.terms.iter().map(|(k, f)| self.term_times(k, f, rhs)).collect()
        };
        for piece in pieces {
            for (k, f) in piece {
                out.add_term(k, f);
            }
        }
        out
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_arity(rhs)?;
        Ok(self.mul(rhs))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_arity(rhs)?;
        Ok(self.add(rhs))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[self, rhs] = self·rhs - rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Action on functions: derivatives differentiate, group elements permute.
    pub fn apply(&self, f: &LocFrac<K>) -> Result<LocFrac<K>> {
        if f.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: f.n(),
            });
        }
        let mut moved: HashMap<&Perm, DerivativeCache<K>> = HashMap::new();
        let mut out = LocFrac::zero(self.n);
        for (k, c) in &self.terms {
            let cache = moved
                .entry(&k.w)
                .or_insert_with(|| DerivativeCache::new(f.act(&k.w)));
            let g = cache.get(&k.d);
            out = out.add(&c.mul(&g));
        }
        Ok(out)
    }

    /// Total `∂`-order, `-1` for the zero operator.
    pub fn gamma_degree(&self) -> i64 {
        self.terms.keys().map(|k| k.order() as i64).max().unwrap_or(-1)
    }

    /// Top-order part with `∂^a` replaced by the commuting symbol `y^a`.
    pub fn principal_symbol(&self) -> Result<SymbolElement<K>> {
        let top = self.gamma_degree();
        if top < 0 {
            return Err(Error::ZeroOperator);
        }
        let mut out = SymbolElement::zero(self.n);
        for (k, f) in &self.terms {
            if k.order() as i64 == top {
                out.add_term(k.w.clone(), k.d.clone(), f.clone());
            }
        }
        Ok(out)
    }

    /// For `u = e·v·e`, the `W`-invariant `p` with symbol `p·e`.
    pub fn spherical_scalar_symbol(&self) -> Result<SymbolPoly<K>> {
        let sym = self.principal_symbol()?;
        let group = all_perms(self.n);
        let id = Perm::identity(self.n);
        let base = sym.component(&id);
        for w in &group {
            let comp = sym.component(w);
            if comp != base {
                return Err(Error::NotSpherical {
                    detail: format!("symbol components at 1 and {w} differ"),
                });
            }
            if base.act(w) != base {
                return Err(Error::NotSpherical {
                    detail: format!("symbol is not invariant under {w}"),
                });
            }
        }
        Ok(base.scale(&K::from_bigint(factorial(self.n))))
    }

    /// Replaces every group element by the identity: `u·e = drop_group(u)·e`.
    pub fn drop_group(&self) -> Self {
        let id = Perm::identity(self.n);
        let mut out = Self::zero(self.n);
        for (k, f) in &self.terms {
            out.add_term(OpKey::new(k.d.clone(), id.clone()), f.clone());
        }
        out
    }

    pub fn is_group_free(&self) -> bool {
        self.terms.keys().all(|k| k.w.is_identity())
    }

    pub fn contains_odd_permutation(&self) -> bool {
        self.terms.keys().any(|k| !k.w.is_even())
    }

    /// `w · u · w⁻¹`.
    pub fn conjugate_by_group(&self, w: &Perm) -> Self {
        let winv = w.inverse();
        let mut out = Self::zero(self.n);
        for (k, f) in &self.terms {
            let d = w.permute_exponents(&k.d);
            let g = w.compose(&k.w).compose(&winv);
            out.add_term(OpKey::new(d, g), f.act(w));
        }
        out
    }

    /// `(1/n!) Σ_w w·u·w⁻¹`.
    pub fn group_average(&self) -> Self {
        let group = all_perms(self.n);
        let mut out = Self::zero(self.n);
        for w in &group {
            out = out.add(&self.conjugate_by_group(w));
        }
        let inv = K::from_bigint(factorial(self.n)).inv().expect("n! is nonzero");
        out.scale(&inv)
    }

    /// The endomorphism fixing functions, sending `∂_i ↦ ∂_i + t·(∂_iδ)/δ` and
    /// `w ↦ χ(w)·w`. Conjugation by `δ^t` and the sign twist are both of this form.
    pub fn substitute(&self, t: &K, chi: impl Fn(&Perm) -> Result<K>) -> Result<Self> {
        let n = self.n;
        let mut shifted: Vec<Vec<SkewOperator<K>>> = vec![vec![Self::one(n)]; n];
        let max_exp: Vec<u16> = (0..n)
            .map(|i| self.terms.keys().map(|k| k.d[i]).max().unwrap_or(0))
            .collect();
        for i in 0..n {
            let gen = Self::partial(n, i + 1)?.add(&Self::from_locfrac(
                LocFrac::log_derivative_delta(n, i).scale(t),
            ));
            for e in 1..=max_exp[i] as usize {
                let next = shifted[i][e - 1].mul(&gen);
                shifted[i].push(next);
            }
        }
        let mut products: HashMap<Exps, SkewOperator<K>> = HashMap::new();
        let mut out = Self::zero(n);
        for (k, f) in &self.terms {
            let scalar = chi(&k.w)?;
            if scalar.is_zero() {
                continue;
            }
            let prod = products
                .entry(k.d.clone())
                .or_insert_with(|| {
                    k.d.iter()
                        .enumerate()
                        .fold(Self::one(n), |acc, (i, &e)| acc.mul(&shifted[i][e as usize]))
                })
                .clone();
            let coeff = f.scale(&scalar);
            for (pk, g) in prod.terms {
                out.add_term(OpKey::new(pk.d, k.w.clone()), coeff.mul(&g));
            }
        }
        Ok(out)
    }

    /// `δ^{-t} · u · δ^{t}`. Odd permutations are only allowed for integer `t`.
    pub fn conjugate_by_delta_power(&self, t: &K) -> Result<Self> {
        if t.is_zero() {
            return Ok(self.clone());
        }
        let parity = t.as_integer().map(|v| v.bit(0));
        self.substitute(t, |w| {
            if w.is_even() {
                return Ok(K::one());
            }
            match parity {
                Some(odd) => Ok(if odd { -K::one() } else { K::one() }),
                None => Err(Error::OddPermutationUnderFormalTwist { perm: w.to_string() }),
            }
        })
    }

    pub fn try_map_coeffs<L: Field>(&self, mut f: impl FnMut(&K) -> Result<L>) -> Result<SkewOperator<L>> {
        let mut out = SkewOperator::zero(self.n);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.try_map_coeffs(&mut f)?);
        }
        Ok(out)
    }

    /// Canonical text in the operator-expression grammar.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Renders at most `limit` terms, noting how many were dropped.
    pub fn render_truncated(&self, limit: usize) -> String {
        if self.len() <= limit {
            return self.render();
        }
        let head = SkewOperator {
            n: self.n,
            terms: self.terms.iter().take(limit).map(|(k, f)| (k.clone(), f.clone())).collect(),
        };
        format!("{} + ... ({} more terms)", head.render(), self.len() - limit)
    }
}

impl SkewOperator<RatFunc> {
    /// Evaluates every coefficient at `c = r`.
    pub fn specialize_c(&self, r: &num_rational::BigRational) -> Result<Self> {
        self.try_map_coeffs(|s| Ok(RatFunc::from_rational(&s.evaluate_at(r)?)))
    }

    /// Substitutes `c ↦ s` in every coefficient.
    pub fn substitute_param(&self, s: &RatFunc) -> Result<Self> {
        self.try_map_coeffs(|v| v.substitute(s))
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

fn derivative_factors(d: &[u16], out: &mut Vec<String>) {
    for (i, &e) in d.iter().enumerate() {
        match e {
            0 => {}
            1 => out.push(format!("d{}", i + 1)),
            _ => out.push(format!("d{}^{}", i + 1, e)),
        }
    }
}

impl<K: Field> fmt::Display for SkewOperator<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            let num = c.numerator();
            let coeff = if num.len() == 1 {
                let (m, v) = num.terms().next().expect("one term");
                m.fmt_factors(&mut factors);
                v.clone()
            } else {
                factors.push(format!("({num})"));
                K::one()
            };
            if c.delta_exponent() > 0 {
                factors.push(format!("del^-{}", c.delta_exponent()));
            }
            derivative_factors(&k.d, &mut factors);
            if !k.w.is_identity() {
                factors.push(k.w.to_string());
            }
            if factors.is_empty() && self.terms.len() == 1 {
                out.push_str(&coeff.to_string());
            } else {
                fmt_term(&coeff, &factors, idx == 0, &mut out);
            }
        }
        write!(f, "{out}")
    }
}

/// A polynomial in the symbol variables `y` with localized coefficients in `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolPoly<K: Field> {
    n: usize,
    terms: BTreeMap<Exps, LocFrac<K>>,
}

impl<K: Field> SymbolPoly<K> {
    pub fn zero(n: usize) -> Self {
        SymbolPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &LocFrac<K>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, y: Exps, f: LocFrac<K>) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&y) {
            Some(c) => {
                let s = c.add(&f);
                if s.is_zero() {
                    self.terms.remove(&y);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(y, f);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (y, f) in &rhs.terms {
            out.add_term(y.clone(), f.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, f) in &self.terms {
            for (b, g) in &rhs.terms {
                let y: Exps = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(y, f.mul(g));
            }
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero(self.n);
        for (y, f) in &self.terms {
            out.add_term(y.clone(), f.scale(c));
        }
        out
    }

    pub fn mul_locfrac(&self, g: &LocFrac<K>) -> Self {
        let mut out = Self::zero(self.n);
        for (y, f) in &self.terms {
            out.add_term(y.clone(), f.mul(g));
        }
        out
    }

    /// Diagonal action on both `x` and `y`.
    pub fn act(&self, w: &Perm) -> Self {
        let mut out = Self::zero(self.n);
        for (y, f) in &self.terms {
            out.add_term(w.permute_exponents(y), f.act(w));
        }
        out
    }
}

impl<K: Field> fmt::Display for SymbolPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(y, c)| {
                let mut ys = Vec::new();
                for (i, &e) in y.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => ys.push(format!("y{}", i + 1)),
                        _ => ys.push(format!("y{}^{}", i + 1, e)),
                    }
                }
                if ys.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    ys.join("*")
                } else {
                    format!("({c})*{}", ys.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element `Σ_w p_w · w` of the associated graded skew ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolElement<K: Field> {
    n: usize,
    terms: BTreeMap<Perm, SymbolPoly<K>>,
}

impl<K: Field> SymbolElement<K> {
    pub fn zero(n: usize) -> Self {
        SymbolElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, w: Perm, y: Exps, f: LocFrac<K>) {
        let n = self.n;
        let entry = self.terms.entry(w.clone()).or_insert_with(|| SymbolPoly::zero(n));
        entry.add_term(y, f);
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn component(&self, w: &Perm) -> SymbolPoly<K> {
        self.terms.get(w).cloned().unwrap_or_else(|| SymbolPoly::zero(self.n))
    }

    pub fn components(&self) -> impl Iterator<Item = (&Perm, &SymbolPoly<K>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(p·w)(q·σ) = p·(w·q)·wσ`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (w, p) in &self.terms {
            for (s, q) in &rhs.terms {
                let prod = p.mul(&q.act(w));
                for (y, f) in prod.terms {
                    out.add_term(w.compose(s), y, f);
                }
            }
        }
        out
    }
}

impl<K: Field> fmt::Display for SymbolElement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, p)| {
                if w.is_identity() {
                    format!("[{p}]")
                } else {
                    format!("[{p}]*{w}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
