//! Finitely supported vectors of the base Hilbert space and paired vectors
//! of its doubled space.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A finitely supported map from integer basis index to real coefficient.
///
/// Canonical form: no stored coefficient is zero. Entries are kept ordered
/// by index so iteration (and hence every accumulated sum) is deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: BTreeMap<i64, f64>,
}

impl SparseVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `b_n`.
    pub fn basis(n: i64) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(n, 1.0);
        Self { entries }
    }

    /// Builds a vector from `(index, coefficient)` pairs, summing duplicates
    /// and dropping exact zeros.
    pub fn from_entries(pairs: impl IntoIterator<Item = (i64, f64)>) -> Self {
        let mut v = Self::zero();
        for (n, c) in pairs {
            v.add_assign_coeff(n, c);
        }
        v
    }

    /// Sets the coefficient at `n`, removing the entry when it is zero.
    pub fn set_coeff(&mut self, n: i64, c: f64) {
        if c == 0.0 {
            self.entries.remove(&n);
        } else {
            self.entries.insert(n, c);
        }
    }

    fn add_assign_coeff(&mut self, n: i64, c: f64) {
        let next = self.coeff(n) + c;
        self.set_coeff(n, next);
    }

    /// The coefficient `(b_n, v)`; zero off the support.
    pub fn coeff(&self, n: i64) -> f64 {
        self.entries.get(&n).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.entries.iter().map(|(&n, &c)| (n, c))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.add_assign_coeff(n, c);
        }
        out
    }

    pub fn scale(&self, k: f64) -> Self {
        if k == 0.0 {
            return Self::zero();
        }
        Self {
            entries: self.entries.iter().map(|(&n, &c)| (n, k * c)).collect(),
        }
    }

    /// Euclidean inner product over the common support.
    pub fn inner(&self, other: &Self) -> f64 {
        // Iterate the smaller support against the larger map.
        let (small, big) = if self.support_len() <= other.support_len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = 0.0;
        for (n, c) in small.iter() {
            acc += c * big.coeff(n);
        }
        acc
    }

    /// Euclidean norm of the coefficients.
    pub fn norm(&self) -> f64 {
        self.entries.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Parses the CLI literal format: comma-separated `index:coefficient`
    /// pairs, e.g. `0:1,3:-0.5`. The empty string is the zero vector.
    pub fn parse_literal(text: &str) -> Result<Self> {
        let mut v = Self::zero();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (idx, coeff) = part.split_once(':').ok_or_else(|| {
                Error::Parse(format!("expected `index:coefficient`, got {part:?}"))
            })?;
            let n: i64 = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {idx:?}")))?;
            let c: f64 = coeff
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {coeff:?}")))?;
            if !c.is_finite() {
                return Err(Error::Parse(format!("non-finite coefficient {coeff:?}")));
            }
            v.add_assign_coeff(n, c);
        }
        Ok(v)
    }

    /// The literal form accepted by [`SparseVector::parse_literal`].
    pub fn to_literal(&self) -> String {
        self.iter()
            .map(|(n, c)| format!("{n}:{c}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.to_literal())
    }
}

/// The truncated harmonic test vector: `sum_{0<|n|<=M} |n|^{-1} b_n`.
pub fn harmonic_test_vector(m: u32) -> SparseVector {
    let m = m.max(1) as i64;
    let mut v = SparseVector::zero();
    for n in 1..=m {
        let c = 1.0 / n as f64;
        v.set_coeff(n, c);
        v.set_coeff(-n, c);
    }
    v
}

/// An ordered pair of sparse vectors: an element of the doubled space.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HatVector {
    pub top: SparseVector,
    pub bottom: SparseVector,
}

impl HatVector {
    pub fn new(top: SparseVector, bottom: SparseVector) -> Self {
        Self { top, bottom }
    }

    /// `x ⊕ 0`.
    pub fn top_only(top: SparseVector) -> Self {
        Self {
            top,
            bottom: SparseVector::zero(),
        }
    }

    /// `0 ⊕ y`.
    pub fn bottom_only(bottom: SparseVector) -> Self {
        Self {
            top: SparseVector::zero(),
            bottom,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.top.is_zero() && self.bottom.is_zero()
    }

    pub fn norm(&self) -> f64 {
        self.top.norm().hypot(self.bottom.norm())
    }
}

impl fmt::Display for HatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (+) {}", self.top, self.bottom)
    }
}
