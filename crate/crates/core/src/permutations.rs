//! Elements of the symmetric group `S_n` in one-line notation.
//!
//! A [`Permutation`] stores `entries[k] = π(k + 1)` with 1-based values.
//! Composition applies the right factor first: `(g·s)(k) = g(s(k))`. Under
//! this convention `g.compose(&prefix_reversal(n, j))` is `g` with its first
//! `j` entries reversed, which is exactly the pancake-network move.
//!
//! Vertex ids are lexicographic ranks (Lehmer codes) of one-line forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` for which `n!` fits comfortably in the rank type.
pub const MAX_RANK_N: usize = 20;

/// `n!` as `u64`. Panics on overflow (`n > 20`).
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation {
    entries: Vec<u8>,
}

impl Permutation {
    /// Validates a one-line form with values `1..=n`.
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || n > MAX_RANK_N {
            return Err(Error::domain(format!("permutation degree {n} outside 1..={MAX_RANK_N}")));
        }
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(Error::domain(format!("{entries:?} is not a permutation of 1..={n}")));
            }
            seen[v] = true;
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: (1..=n as u8).collect() }
    }

    /// Transposition swapping the values `a` and `b` (`a == b` gives the identity).
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::domain(format!("transposition ({a} {b}) outside 1..={n}")));
        }
        let mut p = Self::identity(n);
        p.entries.swap(a - 1, b - 1);
        Ok(p)
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[1, 3, 2]]` for `(1 3 2)`,
    /// meaning `1 ↦ 3 ↦ 2 ↦ 1`.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Result<Self> {
        let mut entries: Vec<u8> = (1..=n as u8).collect();
        let mut touched = vec![false; n + 1];
        for cycle in cycles {
            for (idx, &from) in cycle.iter().enumerate() {
                let to = cycle[(idx + 1) % cycle.len()];
                if from == 0 || from as usize > n || to == 0 || to as usize > n {
                    return Err(Error::domain(format!("cycle {cycle:?} outside 1..={n}")));
                }
                if touched[from as usize] {
                    return Err(Error::domain(format!("cycles {cycles:?} are not disjoint")));
                }
                touched[from as usize] = true;
                entries[from as usize - 1] = to;
            }
        }
        Self::new(entries)
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// `π(k)` for 1-based `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.entries[k - 1] as usize
    }

    /// First symbol `π(1)`.
    pub fn first(&self) -> usize {
        self.entries[0] as usize
    }

    /// Last symbol `π(n)`.
    pub fn last(&self) -> usize {
        self.entries[self.entries.len() - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    /// `self·other`, i.e. `k ↦ self(other(k))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::domain(format!(
                "cannot compose permutations of degree {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(Self { entries: other.entries.iter().map(|&k| self.entries[k as usize - 1]).collect() })
    }

    pub fn inverse(&self) -> Self {
        let mut entries = vec![0u8; self.degree()];
        for (k, &v) in self.entries.iter().enumerate() {
            entries[v as usize - 1] = (k + 1) as u8;
        }
        Self { entries }
    }

    /// `self · r_{1j}`: the first `j` entries reversed.
    pub fn reverse_prefix(&self, j: usize) -> Result<Self> {
        if j < 2 || j > self.degree() {
            return Err(Error::domain(format!("prefix length {j} outside 2..={}", self.degree())));
        }
        let mut entries = self.entries.clone();
        entries[..j].reverse();
        Ok(Self { entries })
    }

    /// Extends a permutation of `1..=m` to `1..=n` by fixing `m+1..=n`.
    pub fn extend_to(&self, n: usize) -> Result<Self> {
        if n < self.degree() {
            return Err(Error::domain(format!("cannot shrink degree {} to {n}", self.degree())));
        }
        let mut entries = self.entries.clone();
        entries.extend(self.degree() as u8 + 1..=n as u8);
        Self::new(entries)
    }

    /// Lexicographic rank of the one-line form, in `0..n!`.
    pub fn rank(&self) -> u64 {
        let n = self.degree();
        let mut used = 0u32;
        let mut rank = 0u64;
        for (pos, &v) in self.entries.iter().enumerate() {
            let smaller_unused = (v as u32 - 1) - (used & ((1u32 << (v - 1)) - 1)).count_ones();
            rank += smaller_unused as u64 * factorial(n - 1 - pos);
            used |= 1 << (v - 1);
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(rank: u64, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_RANK_N {
            return Err(Error::domain(format!("degree {n} outside 1..={MAX_RANK_N}")));
        }
        if rank >= factorial(n) {
            return Err(Error::domain(format!("rank {rank} outside 0..{}", factorial(n))));
        }
        let mut remaining: Vec<u8> = (1..=n as u8).collect();
        let mut entries = Vec::with_capacity(n);
        let mut r = rank;
        for pos in 0..n {
            let f = factorial(n - 1 - pos);
            let idx = (r / f) as usize;
            r %= f;
            entries.push(remaining.remove(idx));
        }
        Ok(Self { entries })
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (idx, v) in self.entries.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = Error;

    fn try_from(entries: Vec<u8>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(p: Permutation) -> Self {
        p.entries
    }
}

/// The prefix reversal `r_{1j}`: `k ↦ j + 1 − k` for `k ≤ j`, fixed above `j`.
pub fn prefix_reversal(n: usize, j: usize) -> Result<Permutation> {
    if n > MAX_RANK_N || j < 2 || j > n {
        return Err(Error::domain(format!("prefix reversal r_1{j} undefined for n = {n}")));
    }
    Permutation::identity(n).reverse_prefix(j)
}

/// The connection set `PR_n = {r_{12}, …, r_{1n}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    reversals: Vec<Permutation>,
}

impl GeneratorSet {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_RANK_N).contains(&n) {
            return Err(Error::domain(format!("generator set needs 2 <= n <= {MAX_RANK_N}, got {n}")));
        }
        let reversals = (2..=n).map(|j| prefix_reversal(n, j)).collect::<Result<_>>()?;
        Ok(Self { n, reversals })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Reversals in order `r_{12}, r_{13}, …`; slot `j − 2` holds `r_{1j}`.
    pub fn reversals(&self) -> &[Permutation] {
        &self.reversals
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.reversals.contains(p)
    }
}
