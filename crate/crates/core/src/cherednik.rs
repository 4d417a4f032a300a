//! Named operators: Dunkl operators, idempotents, the Dunkl Laplacian, the
//! Calogero-Moser operator and the twisting maps between parameters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::field::{factorial, Field};
use crate::locfrac::LocFrac;
use crate::perm::{all_perms, Character, Perm};
use crate::skew::SkewOperator;

/// Rank `n` together with the parameter `κ` used in Dunkl formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CherednikContext<K: Field> {
    n: usize,
    kappa: K,
}

impl<K: Field> CherednikContext<K> {
    pub fn new(n: usize, kappa: K) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("rank must be at least 2, got {n}")));
        }
        Ok(CherednikContext { n, kappa })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> &K {
        &self.kappa
    }

    /// The same rank with parameter `κ + shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        CherednikContext {
            n: self.n,
            kappa: self.kappa.add_ref(&K::from_i64(shift)),
        }
    }

    /// `D_κ(y_i) = ∂_i - ½ Σ_{j≠k} κ ⟨y_i, x_j - x_k⟩ / (x_j - x_k) · (1 - s_jk)`.
    pub fn dunkl(&self, i: usize) -> Result<SkewOperator<K>> {
        let n = self.n;
        let mut out = SkewOperator::partial(n, i)?;
        let half = K::from_i64(2).inv().expect("2 is invertible");
        let i = i - 1;
        for j in 0..n {
            for k in 0..n {
                if j == k {
                    continue;
                }
                let pairing = (j == i) as i64 - (k == i) as i64;
                if pairing == 0 {
                    continue;
                }
                let coeff = LocFrac::inv_root(n, j, k)
                    .scale(&self.kappa.mul_ref(&half).mul_ref(&K::from_i64(pairing)));
                let s = Perm::transposition(n, j + 1, k + 1)?;
                let reflection = SkewOperator::one(n).sub(&SkewOperator::group_element(&s));
                out = out.sub(&reflection.mul_locfrac(&coeff));
            }
        }
        Ok(out)
    }

    pub fn dunkl_all(&self) -> Vec<SkewOperator<K>> {
        (1..=self.n)
            .map(|i| self.dunkl(i).expect("index in range"))
            .collect()
    }

    /// `Σ_i D_κ(y_i)²`.
    pub fn nabla2(&self) -> SkewOperator<K> {
        self.dunkl_all()
            .iter()
            .fold(SkewOperator::zero(self.n), |acc, d| acc.add(&d.mul(d)))
    }
}

/// `e = (1/n!) Σ w` or `e₋ = (1/n!) Σ sign(w) w`.
pub fn idempotent<K: Field>(n: usize, kind: Character) -> SkewOperator<K> {
    let inv = K::from_bigint(factorial(n)).inv().expect("n! is nonzero");
    let mut out = SkewOperator::zero(n);
    for w in all_perms(n) {
        let c = inv.mul_ref(&K::from_i64(kind.value(&w)));
        out = out.add(&SkewOperator::group_element(&w).scale(&c));
    }
    out
}

/// `Δ = Σ ∂_i²`.
pub fn laplacian<K: Field>(n: usize) -> SkewOperator<K> {
    (1..=n).fold(SkewOperator::zero(n), |acc, i| {
        let d = SkewOperator::partial(n, i).expect("index in range");
        acc.add(&d.mul(&d))
    })
}

/// `Σ_{α ∈ R} 1/α²` over roots of both signs.
fn inverse_square_root_sum<K: Field>(n: usize) -> LocFrac<K> {
    let mut acc = LocFrac::zero(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc.add(&LocFrac::inv_root(n, i, j).pow(2));
            }
        }
    }
    acc
}

/// `L_w = Δ - ½ Σ_{α∈R} w(w+1)(α,α)/α²` with `(α,α) = 2`.
pub fn calogero_moser<K: Field>(n: usize, w: &K) -> SkewOperator<K> {
    let ww = w.mul_ref(&w.add_ref(&K::one()));
    laplacian(n).sub(&SkewOperator::from_locfrac(inverse_square_root_sum::<K>(n).scale(&ww)))
}

/// `δ^{-w} u δ^{w}`.
pub fn theta_spher<K: Field>(u: &SkewOperator<K>, w: &K) -> Result<SkewOperator<K>> {
    u.conjugate_by_delta_power(w)
}

/// The twist `φ_κ` of the ambient ring: fixes functions, sends `w ↦ sign(w) w`
/// and `∂_i ↦ ∂_i + 2κ (∂_iδ)/δ`, so that `φ_κ(D_κ(y)) = D_{-κ}(y)`.
pub fn phi_twist<K: Field>(u: &SkewOperator<K>, kappa: &K) -> SkewOperator<K> {
    let two_kappa = kappa.add_ref(kappa);
    u.substitute(&two_kappa, |w| Ok(K::from_i64(w.sign())))
        .expect("the sign character is always defined")
}

/// `δ^{-w}Δδ^{w} + Σ_{α∈R} δ^{-w}(1/α)∂_{h_α}δ^{w} - Σ_{α∈R} w(w+1)/α²`.
pub fn radial_rhs<K: Field>(n: usize, w: &K) -> Result<SkewOperator<K>> {
    let mut first_order = SkewOperator::zero(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dh = SkewOperator::partial(n, i + 1)?.sub(&SkewOperator::partial(n, j + 1)?);
            first_order = first_order.add(&dh.mul_locfrac(&LocFrac::inv_root(n, i, j)));
        }
    }
    let ww = w.mul_ref(&w.add_ref(&K::one()));
    let potential = SkewOperator::from_locfrac(inverse_square_root_sum::<K>(n).scale(&ww));
    Ok(theta_spher(&laplacian(n), w)?
        .add(&theta_spher(&first_order, w)?)
        .sub(&potential))
}

/// `r` is good unless it lies in `(-1, 0)` and `r·b ∈ Z` for some `2 ≤ b ≤ n`.
pub fn is_good(r: &BigRational, n: usize) -> bool {
    let in_interval = r.is_negative() && *r > -BigRational::one();
    if !in_interval {
        return true;
    }
    !(2..=n).any(|b| (r * BigRational::from_integer(BigInt::from(b))).is_integer())
}
