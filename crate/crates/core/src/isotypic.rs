//! Invariant theory of S_n acting diagonally on `K[x, y]`: isotypic bases,
//! the powers `A^m` of the sign-isotypic component, and Molien series.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::field::{factorial, Field};
use crate::perm::{all_perms, Character};
use crate::poly::{monomials_of_bidegree, Monomial, Poly};
use crate::rank::{Echelon, SparseVec};

/// A basis of the `χ`-isotypic part (or of `A^m`) in one bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicBasis<K: Field> {
    pub n: usize,
    pub character: Character,
    pub bidegree: (u32, u32),
    pub basis: Vec<Poly<K>>,
}

impl<K: Field> IsotypicBasis<K> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub(crate) fn poly_vector<K: Field>(p: &Poly<K>) -> SparseVec<Monomial, K> {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// `(1/n!) Σ_w χ(w) w·p`.
pub fn project<K: Field>(p: &Poly<K>, character: Character) -> Poly<K> {
    let n = p.n();
    let mut acc = Poly::zero(n);
    for w in all_perms(n) {
        let moved = p.act(&w);
        acc = if character.value(&w) == 1 {
            acc.add(&moved)
        } else {
            acc.sub(&moved)
        };
    }
    acc.scale(&K::from_bigint(factorial(n)).inv().expect("n! is nonzero"))
}

/// Keeps the members of `candidates` that enlarge the span, in order.
fn independent_subset<K: Field>(candidates: impl IntoIterator<Item = Poly<K>>) -> Vec<Poly<K>> {
    let mut ech = Echelon::new();
    candidates
        .into_iter()
        .filter(|p| !p.is_zero() && ech.insert(poly_vector(p)))
        .collect()
}

pub fn isotypic_basis<K: Field>(n: usize, character: Character, bidegree: (u32, u32)) -> IsotypicBasis<K> {
    let (i, j) = bidegree;
    let basis = independent_subset(
        monomials_of_bidegree(n, i, j)
            .into_iter()
            .map(|m| project(&Poly::monomial(n, m, K::one()), character)),
    );
    IsotypicBasis {
        n,
        character,
        bidegree,
        basis,
    }
}

/// Memoized bases of `A^m`, the span of products of `m` sign-isotypic elements.
#[derive(Debug)]
pub struct APowers<K: Field> {
    n: usize,
    cache: HashMap<(u32, u32, u32), Vec<Poly<K>>>,
}

impl<K: Field> APowers<K> {
    pub fn new(n: usize) -> Self {
        APowers {
            n,
            cache: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&mut self, m: u32, i: u32, j: u32) -> Vec<Poly<K>> {
        if let Some(b) = self.cache.get(&(m, i, j)) {
            return b.clone();
        }
        let b = match m {
            0 => isotypic_basis(self.n, Character::Trivial, (i, j)).basis,
            1 => isotypic_basis(self.n, Character::Sign, (i, j)).basis,
            _ => {
                let mut products = Vec::new();
                for i1 in 0..=i {
                    for j1 in 0..=j {
                        let right = self.basis(1, i1, j1);
                        if right.is_empty() {
                            continue;
                        }
                        let left = self.basis(m - 1, i - i1, j - j1);
                        for p in &left {
                            for q in &right {
                                products.push(p.mul(q));
                            }
                        }
                    }
                }
                independent_subset(products)
            }
        };
        self.cache.insert((m, i, j), b.clone());
        b
    }

    pub fn dim(&mut self, m: u32, i: u32, j: u32) -> usize {
        self.basis(m, i, j).len()
    }

    /// Echelon form of the `A^m` basis, for membership tests.
    pub fn echelon(&mut self, m: u32, i: u32, j: u32) -> Echelon<Monomial, K> {
        let mut ech = Echelon::new();
        for p in self.basis(m, i, j) {
            ech.insert(poly_vector(&p));
        }
        ech
    }
}

pub fn a_power_basis<K: Field>(n: usize, m: u32, bidegree: (u32, u32)) -> IsotypicBasis<K> {
    let basis = APowers::new(n).basis(m, bidegree.0, bidegree.1);
    IsotypicBasis {
        n,
        character: Character::power(m),
        bidegree,
        basis,
    }
}

/// Coefficients of `1/det(1 - q·w)` up to `q^deg`, from the cycle type of `w`.
fn inverse_char_poly_series(cycles: &[usize], deg: usize) -> Vec<BigInt> {
    let mut series = vec![BigInt::zero(); deg + 1];
    series[0] = BigInt::from(1);
    for &len in cycles {
        for k in len..=deg {
            let prev = series[k - len].clone();
            series[k] += prev;
        }
    }
    series
}

/// Coefficient of `q^i t^j` in `(1/n!) Σ_w χ(w) / (det(1 - qw) det(1 - tw))`.
pub fn molien_dimension(n: usize, character: Character, bidegree: (u32, u32)) -> usize {
    let (i, j) = (bidegree.0 as usize, bidegree.1 as usize);
    let mut total = BigInt::zero();
    for w in all_perms(n) {
        let series = inverse_char_poly_series(&w.cycle_type(), i.max(j));
        total += &series[i] * &series[j] * character.value(&w);
    }
    let value = BigRational::new(total, factorial(n));
    assert!(value.is_integer(), "Molien coefficient must be an integer");
    value.to_integer().to_usize().expect("dimension is nonnegative")
}

/// Dimensions indexed by bidegree `(i, j)`; `i` may be negative once `δ⁻¹` is involved.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TableRepr", from = "TableRepr")]
pub struct DimensionTable {
    pub space: String,
    pub n: usize,
    pub params: BTreeMap<String, String>,
    pub entries: BTreeMap<(i64, u32), usize>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    space: String,
    n: usize,
    params: BTreeMap<String, String>,
    entries: Vec<TableEntry>,
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    i: i64,
    j: u32,
    dim: usize,
}

impl From<DimensionTable> for TableRepr {
    fn from(t: DimensionTable) -> Self {
        TableRepr {
            space: t.space,
            n: t.n,
            params: t.params,
            entries: t
                .entries
                .into_iter()
                .map(|((i, j), dim)| TableEntry { i, j, dim })
                .collect(),
        }
    }
}

impl From<TableRepr> for DimensionTable {
    fn from(r: TableRepr) -> Self {
        DimensionTable {
            space: r.space,
            n: r.n,
            params: r.params,
            entries: r.entries.into_iter().map(|e| ((e.i, e.j), e.dim)).collect(),
        }
    }
}

impl DimensionTable {
    pub fn new(space: impl Into<String>, n: usize) -> Self {
        DimensionTable {
            space: space.into(),
            n,
            ..Default::default()
        }
    }

    pub fn get(&self, i: i64, j: u32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Dimensions of `A^m` (or of the invariants for `m = 0`) for `i ≤ dx`, `j ≤ dy`.
pub fn a_power_table<K: Field>(n: usize, m: u32, dx: u32, dy: u32) -> DimensionTable {
    let mut powers = APowers::<K>::new(n);
    let mut table = DimensionTable::new(format!("A^{m}"), n);
    table.params.insert("m".into(), m.to_string());
    for i in 0..=dx {
        for j in 0..=dy {
            table.entries.insert((i as i64, j), powers.dim(m, i, j));
        }
    }
    table
}

/// Dimensions of the `χ`-isotypic component for `i ≤ dx`, `j ≤ dy`.
pub fn isotypic_table<K: Field>(n: usize, character: Character, dx: u32, dy: u32) -> DimensionTable {
    let mut table = DimensionTable::new(format!("isotypic({character})"), n);
    for i in 0..=dx {
        for j in 0..=dy {
            table
                .entries
                .insert((i as i64, j), isotypic_basis::<K>(n, character, (i, j)).dim());
        }
    }
    table
}
