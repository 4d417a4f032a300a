//! Permutations of `{1..n}`, the Weyl group S_n of type A.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A permutation stored by its images (0-based internally, 1-based in text).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: SmallVec<[u8; 8]>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    /// Builds a permutation from 1-based images.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
            seen[i - 1] = true;
        }
        Ok(Perm {
            images: images.iter().map(|&i| (i - 1) as u8).collect(),
        })
    }

    /// The transposition exchanging `i` and `j` (1-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        for idx in [i, j] {
            if idx == 0 || idx > n {
                return Err(Error::IndexOutOfRange { index: idx, n });
            }
        }
        if i == j {
            return Err(Error::InvalidArgument(format!("s({i},{j}) is not a transposition")));
        }
        let mut p = Self::identity(n);
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Composition `self ∘ rhs`, i.e. `rhs` is applied first.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        Perm {
            images: rhs.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images: SmallVec<[u8; 8]> = SmallVec::from_elem(0, self.n());
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u8;
        }
        Perm { images }
    }

    /// Cycle lengths, including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycle_type().iter().filter(|&&l| l % 2 == 0).count() % 2 == 0
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i64 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    /// Permutes an exponent vector by the diagonal action: `out[w(i)] = e[i]`.
    pub fn permute_exponents<T: Copy + Default>(&self, e: &[T]) -> SmallVec<[T; 8]> {
        let mut out: SmallVec<[T; 8]> = SmallVec::from_elem(T::default(), e.len());
        for (i, &v) in e.iter().enumerate() {
            out[self.apply(i)] = v;
        }
        out
    }

    /// A word in adjacent transpositions: `self = s(i1,i1+1) * s(i2,i2+1) * ...`,
    /// returned as 1-based left indices `i1, i2, ...`.
    pub fn adjacent_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut rev = Vec::new();
        while let Some(i) = (0..w.n().saturating_sub(1)).find(|&i| w.images[i] > w.images[i + 1]) {
            w.images.swap(i, i + 1);
            rev.push(i + 1);
        }
        rev.reverse();
        rev
    }

    /// If this is a transposition, its two moved points (1-based, ascending).
    pub fn as_transposition(&self) -> Option<(usize, usize)> {
        let moved: Vec<usize> = (0..self.n()).filter(|&i| self.apply(i) != i).collect();
        match moved.as_slice() {
            [a, b] => Some((a + 1, b + 1)),
            _ => None,
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        if let Some((i, j)) = self.as_transposition() {
            return write!(f, "s({i},{j})");
        }
        let parts: Vec<String> = self
            .adjacent_word()
            .into_iter()
            .map(|i| format!("s({},{})", i, i + 1))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A one-dimensional character of S_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Character {
    Trivial,
    Sign,
}

impl Character {
    pub fn value(self, w: &Perm) -> i64 {
        match self {
            Character::Trivial => 1,
            Character::Sign => w.sign(),
        }
    }

    /// `Sign^m`.
    pub fn power(m: u32) -> Self {
        if m.is_multiple_of(2) {
            Character::Trivial
        } else {
            Character::Sign
        }
    }
}

impl std::str::FromStr for Character {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triv" | "trivial" => Ok(Character::Trivial),
            "sign" => Ok(Character::Sign),
            other => Err(Error::InvalidArgument(format!("unknown isotype {other:?}"))),
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Character::Trivial => "triv",
            Character::Sign => "sign",
        })
    }
}

/// All elements of S_n in lexicographic order of their image lists.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(Perm {
            images: current.iter().copied().collect(),
        });
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}
