//! The localized coordinate ring `K[x1..xn][δ⁻¹]`.

use std::any::{Any, TypeId};
use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::perm::Perm;
use crate::poly::{discriminant, Poly};

struct DeltaData<K: Field> {
    delta: Poly<K>,
    partials: Vec<Poly<K>>,
}

thread_local! {
    static DELTA_CACHE: RefCell<HashMap<(TypeId, usize), Rc<dyn Any>>> = RefCell::new(HashMap::new());
}

fn delta_data<K: Field>(n: usize) -> Rc<DeltaData<K>> {
    let key = (TypeId::of::<K>(), n);
    let cached = DELTA_CACHE.with(|c| c.borrow().get(&key).cloned());
    if let Some(any) = cached {
        return any.downcast::<DeltaData<K>>().expect("cache keyed by type");
    }
    let delta = discriminant::<K>(n);
    let partials = (0..n).map(|i| delta.derivative_slot(i)).collect();
    let data = Rc::new(DeltaData { delta, partials });
    DELTA_CACHE.with(|c| c.borrow_mut().insert(key, data.clone() as Rc<dyn Any>));
    data
}

/// `δ`, cached per thread.
pub fn delta_poly<K: Field>(n: usize) -> Poly<K> {
    delta_data::<K>(n).delta.clone()
}

/// Exact division by `δ`, one linear factor at a time. `None` if `δ ∤ p`.
fn divide_by_delta<K: Field>(p: &Poly<K>) -> Option<Poly<K>> {
    let n = p.n();
    let mut q = p.clone();
    for i in 0..n {
        for j in i + 1..n {
            q = q.div_exact(&Poly::linear_root(n, i, j))?;
        }
    }
    Some(q)
}

/// An element `num / δ^k` of the localized ring, with `δ ∤ num` whenever `k > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocFrac<K: Field> {
    num: Poly<K>,
    k: u32,
}

impl<K: Field> LocFrac<K> {
    /// Cancels the largest power of `δ` dividing `p` against `δ^k`.
    pub fn normalize(p: Poly<K>, k: u32) -> Result<Self> {
        if !p.is_x_only() {
            return Err(Error::WrongVariableFamily);
        }
        Ok(Self::normalize_x(p, k))
    }

    fn normalize_x(mut p: Poly<K>, mut k: u32) -> Self {
        if p.is_zero() {
            return LocFrac { num: p, k: 0 };
        }
        while k > 0 {
            match divide_by_delta(&p) {
                Some(q) => {
                    p = q;
                    k -= 1;
                }
                None => break,
            }
        }
        LocFrac { num: p, k }
    }

    pub fn zero(n: usize) -> Self {
        LocFrac {
            num: Poly::zero(n),
            k: 0,
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, K::one())
    }

    pub fn constant(n: usize, c: K) -> Self {
        LocFrac {
            num: Poly::constant(n, c),
            k: 0,
        }
    }

    pub fn from_poly(p: Poly<K>) -> Result<Self> {
        Self::normalize(p, 0)
    }

    /// `δ^e` for any integer `e`.
    pub fn delta_power(n: usize, e: i64) -> Self {
        if e >= 0 {
            LocFrac {
                num: delta_poly::<K>(n).pow(e as u32),
                k: 0,
            }
        } else {
            LocFrac {
                num: Poly::one(n),
                k: (-e) as u32,
            }
        }
    }

    /// `1 / (x_i - x_j)` for 0-based `i != j`.
    pub fn inv_root(n: usize, i: usize, j: usize) -> Self {
        let (a, b, sign) = if i < j { (i, j, K::one()) } else { (j, i, -K::one()) };
        let cofactor = delta_poly::<K>(n)
            .div_exact(&Poly::linear_root(n, a, b))
            .expect("root divides the discriminant");
        LocFrac {
            num: cofactor.scale(&sign),
            k: 1,
        }
    }

    /// `(∂_i δ) / δ` for 0-based `i`.
    pub fn log_derivative_delta(n: usize, i: usize) -> Self {
        let data = delta_data::<K>(n);
        Self::normalize_x(data.partials[i].clone(), 1)
    }

    pub fn n(&self) -> usize {
        self.num.n()
    }

    pub fn numerator(&self) -> &Poly<K> {
        &self.num
    }

    pub fn delta_exponent(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.num.as_constant().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when this is the constant `c`.
    pub fn as_constant(&self) -> Option<K> {
        if self.k == 0 {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_polynomial(&self) -> Option<&Poly<K>> {
        (self.k == 0).then_some(&self.num)
    }

    fn lift(&self, target: u32) -> Poly<K> {
        let delta = delta_data::<K>(self.n());
        let mut p = self.num.clone();
        for _ in self.k..target {
            p = p.mul(&delta.delta);
        }
        p
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n(), rhs.n(), "arity mismatch");
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.k == rhs.k {
            return Self::normalize_x(self.num.add(&rhs.num), self.k);
        }
        let k = self.k.max(rhs.k);
        Self::normalize_x(self.lift(k).add(&rhs.lift(k)), k)
    }

    pub fn neg(&self) -> Self {
        LocFrac {
            num: self.num.neg(),
            k: self.k,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n(), rhs.n(), "arity mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.n());
        }
        let num = self.num.mul(&rhs.num);
        if self.k + rhs.k == 0 {
            return LocFrac { num, k: 0 };
        }
        Self::normalize_x(num, self.k + rhs.k)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.n());
        }
        LocFrac {
            num: self.num.scale(c),
            k: self.k,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Checked arithmetic mirroring [`crate::poly::poly_arith`].
    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.num.check_arity(&rhs.num)?;
        Ok(self.add(rhs))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.num.check_arity(&rhs.num)?;
        Ok(self.mul(rhs))
    }

    /// `∂/∂x_i` (0-based) via the quotient rule.
    pub fn derivative(&self, i: usize) -> Self {
        if self.k == 0 {
            return LocFrac {
                num: self.num.derivative_slot(i),
                k: 0,
            };
        }
        let data = delta_data::<K>(self.n());
        let dp = self.num.derivative_slot(i);
        let kk = K::from_i64(self.k as i64);
        let num = dp
            .mul(&data.delta)
            .sub(&self.num.mul(&data.partials[i]).scale(&kk));
        Self::normalize_x(num, self.k + 1)
    }

    /// Checked `∂/∂x_i` with a 1-based index.
    pub fn loc_derivative(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        Ok(self.derivative(i - 1))
    }

    /// Iterated derivative `∂^a`.
    pub fn derivative_multi(&self, a: &[u16]) -> Self {
        let mut f = self.clone();
        for (i, &e) in a.iter().enumerate() {
            for _ in 0..e {
                if f.is_zero() {
                    return f;
                }
                f = f.derivative(i);
            }
        }
        f
    }

    /// `w·(p/δ^k) = (w·p) sign(w)^k / δ^k`.
    pub fn act(&self, w: &Perm) -> Self {
        let p = self.num.act(w);
        let num = if self.k % 2 == 1 && !w.is_even() { p.neg() } else { p };
        LocFrac { num, k: self.k }
    }

    pub fn try_map_coeffs<L: Field>(&self, f: impl FnMut(&K) -> Result<L>) -> Result<LocFrac<L>> {
        Ok(LocFrac::normalize_x(self.num.try_map_coeffs(f)?, self.k))
    }

    /// Splits into pieces `p_d / δ^k` with `p_d` x-homogeneous of degree `d`,
    /// keyed by the total degree `d - k·deg δ`.
    pub fn degree_components(&self) -> Vec<(i64, LocFrac<K>)> {
        let nd = crate::poly::discriminant_degree(self.n()) as i64;
        self.num
            .x_components()
            .into_iter()
            .map(|(d, p)| (d as i64 - self.k as i64 * nd, Self::normalize_x(p, self.k)))
            .collect()
    }

    /// Renders in the operator-expression grammar: `p` or `(p)*del^-k`.
    pub fn render_factor(&self) -> String {
        let p = if self.num.len() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        if self.k == 0 {
            p
        } else {
            format!("{p}*del^-{}", self.k)
        }
    }
}

impl<K: Field> fmt::Display for LocFrac<K> {
    /// `p` or `p / del^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({}) / del^{}", self.num, self.k)
        } else {
            write!(f, "{} / del^{}", self.num, self.k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_perms;
    use crate::scalar::RatFunc;

    type L = LocFrac<RatFunc>;
    type P = Poly<RatFunc>;

    fn delta(n: usize) -> P {
        delta_poly::<RatFunc>(n)
    }

    #[test]
    fn normalize_examples() {
        let x1 = P::x(2, 1);
        let a = L::normalize(delta(2).mul(&x1), 2).unwrap();
        assert_eq!((a.numerator().clone(), a.delta_exponent()), (x1.clone(), 1));
        let b = L::normalize(x1.clone(), 0).unwrap();
        assert_eq!((b.numerator().clone(), b.delta_exponent()), (x1, 0));
        let c = L::normalize(delta(2).pow(2), 1).unwrap();
        assert_eq!((c.numerator().clone(), c.delta_exponent()), (delta(2), 0));
        assert_eq!(
            L::normalize(P::y(2, 1), 0),
            Err(Error::WrongVariableFamily)
        );
    }

    #[test]
    fn arithmetic_examples() {
        let inv = L::delta_power(2, -1);
        assert!(inv.add(&inv.neg()).is_zero());
        assert!(inv.mul(&L::delta_power(2, 1)).is_one());

        let x1 = L::from_poly(P::x(2, 1)).unwrap().mul(&inv);
        let x2 = L::from_poly(P::x(2, 2)).unwrap().mul(&inv);
        let s = x1.add(&x2);
        // x1 + x2 does not vanish on x1 = x2, so δ cannot divide it
        let sum = P::x(2, 1).add(&P::x(2, 2));
        assert!(sum.div_exact(&delta(2)).is_none());
        assert_eq!(s.delta_exponent(), 1);
        assert_eq!(s.numerator(), &sum);
    }

    #[test]
    fn derivative_examples() {
        let inv = L::delta_power(2, -1);
        // ∂1 (x1 - x2)^-1 = -(x1 - x2)^-2
        assert_eq!(inv.derivative(0), L::delta_power(2, -2).neg());
        assert!(L::from_poly(P::x(2, 2)).unwrap().derivative(0).is_zero());
        let one = L::normalize(delta(2), 1).unwrap();
        assert!(one.derivative(0).is_zero());
        assert!(inv.loc_derivative(3).is_err());
    }

    #[test]
    fn inverse_roots() {
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let root = L::from_poly(P::x(n, i + 1).sub(&P::x(n, j + 1))).unwrap();
                assert!(root.mul(&L::inv_root(n, i, j)).is_one());
            }
        }
    }

    #[test]
    fn action_is_a_group_action() {
        let n = 3;
        let f = L::from_poly(P::x(3, 1).mul(&P::x(3, 2)).add(&P::x(3, 3)))
            .unwrap()
            .mul(&L::delta_power(n, -1));
        let g = all_perms(n);
        for v in &g {
            for w in &g {
                assert_eq!(f.act(&v.compose(w)), f.act(w).act(v));
            }
        }
    }
}
