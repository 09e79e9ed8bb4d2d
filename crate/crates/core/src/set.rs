//! Subsets of a small indexed ground set, stored as a single bit word.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Result, TopoError};

/// Largest ground set a [`PointSet`] can describe.
pub const MAX_UNIVERSE: usize = 64;

/// A subset of `{0, …, universe_size − 1}`.
///
/// Bit `i` of the word is set iff point `i` is a member. Set algebra between
/// two sets over different universes is a programming error and panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointSet {
    bits: u64,
    universe: u32,
}

#[inline]
fn full_mask(universe: usize) -> u64 {
    if universe >= 64 {
        u64::MAX
    } else {
        (1u64 << universe) - 1
    }
}

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        assert!(
            universe <= MAX_UNIVERSE,
            "universe of {universe} points exceeds {MAX_UNIVERSE}"
        );
        PointSet {
            bits: 0,
            universe: universe as u32,
        }
    }

    pub fn full(universe: usize) -> Self {
        assert!(
            universe <= MAX_UNIVERSE,
            "universe of {universe} points exceeds {MAX_UNIVERSE}"
        );
        PointSet {
            bits: full_mask(universe),
            universe: universe as u32,
        }
    }

    pub fn singleton(universe: usize, point: usize) -> Self {
        assert!(
            point < universe,
            "point {point} outside universe of {universe}"
        );
        PointSet {
            bits: 1 << point,
            universe: universe as u32,
        }
    }

    /// Builds a set from raw bits, rejecting bits at or above `universe`.
    pub fn from_bits(universe: usize, bits: u64) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(TopoError::Resource {
                what: "universe size",
                requested: universe,
                cap: MAX_UNIVERSE,
            });
        }
        if bits & !full_mask(universe) != 0 {
            return Err(TopoError::input(format!(
                "bit pattern {bits:#x} has members outside a universe of {universe} points"
            )));
        }
        Ok(PointSet {
            bits,
            universe: universe as u32,
        })
    }

    /// Bits are masked to the universe; used where the caller already guarantees range.
    pub(crate) fn from_bits_truncate(universe: usize, bits: u64) -> Self {
        PointSet {
            bits: bits & full_mask(universe),
            universe: universe as u32,
        }
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(universe: usize, points: I) -> Result<Self> {
        let mut set = PointSet::empty(universe);
        for p in points {
            if p >= universe {
                return Err(TopoError::input(format!(
                    "point {p} is outside a universe of {universe} points"
                )));
            }
            set.bits |= 1 << p;
        }
        Ok(set)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn universe(self) -> usize {
        self.universe as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_full(self) -> bool {
        self.bits == full_mask(self.universe())
    }

    #[inline]
    pub fn contains(self, point: usize) -> bool {
        point < self.universe() && self.bits >> point & 1 == 1
    }

    #[inline]
    fn check(self, other: PointSet) {
        assert_eq!(
            self.universe, other.universe,
            "set algebra across universes of {} and {} points",
            self.universe, other.universe
        );
    }

    #[inline]
    pub fn union(self, other: PointSet) -> PointSet {
        self.check(other);
        PointSet {
            bits: self.bits | other.bits,
            ..self
        }
    }

    #[inline]
    pub fn intersection(self, other: PointSet) -> PointSet {
        self.check(other);
        PointSet {
            bits: self.bits & other.bits,
            ..self
        }
    }

    #[inline]
    pub fn difference(self, other: PointSet) -> PointSet {
        self.check(other);
        PointSet {
            bits: self.bits & !other.bits,
            ..self
        }
    }

    #[inline]
    pub fn complement(self) -> PointSet {
        PointSet {
            bits: !self.bits & full_mask(self.universe()),
            ..self
        }
    }

    #[inline]
    pub fn with(self, point: usize) -> PointSet {
        assert!(point < self.universe());
        PointSet {
            bits: self.bits | 1 << point,
            ..self
        }
    }

    #[inline]
    pub fn without(self, point: usize) -> PointSet {
        PointSet {
            bits: self.bits & !(1u64.checked_shl(point as u32).unwrap_or(0)),
            ..self
        }
    }

    #[inline]
    pub fn is_subset(self, other: PointSet) -> bool {
        self.check(other);
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn intersects(self, other: PointSet) -> bool {
        self.check(other);
        self.bits & other.bits != 0
    }

    /// The smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Members {
        Members { bits: self.bits }
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of this set, starting from the empty set (carry-rippler order).
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.bits,
            next: Some(0),
            universe: self.universe,
        }
    }

    /// Applies a point relabeling `perm` (old index → new index) over a universe of `perm.len()`.
    pub fn relabel(self, perm: &[usize]) -> PointSet {
        let mut bits = 0u64;
        for p in self.iter() {
            bits |= 1 << perm[p];
        }
        PointSet {
            bits,
            universe: perm.len() as u32,
        }
    }

    pub(crate) fn ensure_universe(self, expected: usize) -> Result<()> {
        if self.universe() == expected {
            Ok(())
        } else {
            Err(TopoError::UniverseMismatch {
                expected,
                found: self.universe(),
            })
        }
    }
}

/// Canonical order: by universe, then cardinality, then numeric value of the bit word.
impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .cmp(&other.universe)
            .then(self.len().cmp(&other.len()))
            .then(self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.universe)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

pub struct Members {
    bits: u64,
}

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let p = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
    universe: u32,
}

impl Iterator for Subsets {
    type Item = PointSet;

    fn next(&mut self) -> Option<PointSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some(cur.wrapping_sub(self.mask) & self.mask)
        };
        Some(PointSet {
            bits: cur,
            universe: self.universe,
        })
    }
}

/// All subsets of `{0..universe}` ordered by size, then lexicographically by member list.
pub fn subsets_by_size(universe: usize) -> impl Iterator<Item = PointSet> {
    use itertools::Itertools;
    (0..=universe).flat_map(move |k| {
        (0..universe)
            .combinations(k)
            .map(move |c| PointSet::from_points(universe, c).expect("in range"))
    })
}
