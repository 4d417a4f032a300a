//! Exact linear algebra over a [`Field`]: dense rank and an incremental sparse
//! row echelon form.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;

/// Rank of a dense matrix by fraction-free (Bareiss) elimination. The pivot in
/// each column is the first nonzero entry at or below the current row.
pub fn exact_rank<K: Field>(rows: &[Vec<K>]) -> Result<usize> {
    let Some(first) = rows.first() else {
        return Ok(0);
    };
    let width = first.len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::ShapeError {
                row: r,
                expected: width,
                found: row.len(),
            });
        }
    }
    let mut m: Vec<Vec<K>> = rows.to_vec();
    let mut rank = 0;
    let mut prev = K::one();
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..m.len() {
            let factor = m[r][col].clone();
            for c in col..width {
                let v = pivot.mul_ref(&m[r][c]).sub_ref(&factor.mul_ref(&m[rank][c]));
                m[r][c] = v / prev.clone();
            }
        }
        prev = pivot;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    Ok(rank)
}

/// A sparse vector indexed by an ordered key.
pub type SparseVec<C, K> = BTreeMap<C, K>;

/// Row echelon form built one vector at a time. Each stored row is monic at its
/// smallest key, and no two rows share a leading key.
#[derive(Clone, Debug)]
pub struct Echelon<C: Ord + Clone, K: Field> {
    rows: BTreeMap<C, SparseVec<C, K>>,
}

impl<C: Ord + Clone, K: Field> Default for Echelon<C, K> {
    fn default() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<C: Ord + Clone, K: Field> Echelon<C, K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Stored rows keyed by their leading entry.
    pub fn rows(&self) -> impl Iterator<Item = (&C, &SparseVec<C, K>)> {
        self.rows.iter()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, mut v: SparseVec<C, K>) -> SparseVec<C, K> {
        let mut cursor: Option<C> = None;
        loop {
            let next = v
                .iter()
                .filter(|(k, _)| cursor.as_ref().is_none_or(|c| *k > c))
                .find(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((key, coeff)) = next else {
                return v;
            };
            for (k, r) in &self.rows[&key] {
                let entry = v.entry(k.clone()).or_insert_with(K::zero);
                *entry = entry.sub_ref(&coeff.mul_ref(r));
                if entry.is_zero() {
                    v.remove(k);
                }
            }
            cursor = Some(key);
        }
    }

    pub fn contains(&self, v: SparseVec<C, K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns `true` when the rank grew.
    pub fn insert(&mut self, v: SparseVec<C, K>) -> bool {
        let r = self.reduce(v);
        let Some((lead, c)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = c.inv().expect("leading entry is nonzero");
        let monic = r.into_iter().map(|(k, v)| (k, v.mul_ref(&inv))).collect();
        self.rows.insert(lead, monic);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RatFunc;
    use num_traits::{One, Zero};

    fn r(v: i64) -> RatFunc {
        RatFunc::from(v)
    }

    #[test]
    fn rank_examples() {
        let zero = vec![vec![r(0); 3]; 3];
        assert_eq!(exact_rank(&zero).unwrap(), 0);
        let id: Vec<Vec<RatFunc>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect())
            .collect();
        assert_eq!(exact_rank(&id).unwrap(), 3);
        let c = RatFunc::param();
        let rows = vec![vec![r(1), c.clone()], vec![c.clone(), c.clone() * c]];
        assert_eq!(exact_rank(&rows).unwrap(), 1);
        assert!(matches!(
            exact_rank(&[vec![r(1), r(2)], vec![r(1)]]),
            Err(Error::ShapeError { row: 1, expected: 2, found: 1 })
        ));
        assert_eq!(exact_rank::<RatFunc>(&[]).unwrap(), 0);
    }

    #[test]
    fn echelon_matches_dense_rank() {
        let c = RatFunc::param();
        let rows = vec![
            vec![r(1), r(2), r(3)],
            vec![c.clone(), r(0), r(1)],
            vec![r(1) + c.clone(), r(2), r(4)],
            vec![r(0), r(0), c],
        ];
        let mut ech = Echelon::new();
        for row in &rows {
            let v: SparseVec<usize, RatFunc> = row
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect();
            ech.insert(v);
        }
        assert_eq!(ech.rank(), exact_rank(&rows).unwrap());
        assert_eq!(ech.rank(), 3);
    }
}
