//! Finite topological spaces and their primitive queries.
//!
//! A [`FiniteSpace`] stores its complete family of open sets in canonical
//! order (cardinality, then bit value) so that two spaces are equal exactly
//! when their topologies are. Each point's minimal open neighborhood is cached
//! at construction; most queries (closure, discreteness, separation) reduce to
//! bit operations against it.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Result, TopoError};
use crate::set::PointSet;

/// A topology on the points `0..n`.
///
/// Cloning is cheap: the open family is shared.
#[derive(Clone)]
pub struct FiniteSpace {
    n: usize,
    opens: Arc<[PointSet]>,
    minimal: Arc<[PointSet]>,
    subbase: Option<Arc<[PointSet]>>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.opens == other.opens
    }
}

impl Eq for FiniteSpace {}

impl Hash for FiniteSpace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.opens.hash(state);
    }
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSpace(n={}, opens=[", self.n)?;
        for (i, u) in self.opens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}")?;
        }
        f.write_str("])")
    }
}

impl Serialize for FiniteSpace {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("FiniteSpace", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("opens", &*self.opens)?;
        st.end()
    }
}

fn canonical(mut family: Vec<PointSet>) -> Vec<PointSet> {
    family.sort();
    family.dedup();
    family
}

fn minimal_neighborhoods(n: usize, opens: &[PointSet]) -> Vec<PointSet> {
    (0..n)
        .map(|x| {
            opens
                .iter()
                .filter(|u| u.contains(x))
                .fold(PointSet::full(n), |acc, u| acc.intersection(*u))
        })
        .collect()
}

impl FiniteSpace {
    fn assemble(n: usize, opens: Vec<PointSet>, subbase: Option<Vec<PointSet>>) -> Self {
        let minimal = minimal_neighborhoods(n, &opens);
        FiniteSpace {
            n,
            opens: opens.into(),
            minimal: minimal.into(),
            subbase: subbase.map(Into::into),
        }
    }

    /// Builds a space from an explicit open family, which must already be a topology.
    pub fn from_opens(n: usize, family: impl IntoIterator<Item = PointSet>) -> Result<Self> {
        let family: Vec<PointSet> = family.into_iter().collect();
        for u in &family {
            u.ensure_universe(n)?;
        }
        let family = canonical(family);
        let report = AxiomReport::for_family(n, &family);
        if !report.holds() {
            return Err(TopoError::input(report.failures().join("; ")));
        }
        Ok(Self::assemble(n, family, None))
    }

    /// Wraps a family without checking the axioms.
    ///
    /// Exists so tests and the suite's self-test can inject malformed spaces;
    /// nothing else should call it.
    #[doc(hidden)]
    pub fn from_opens_unchecked(n: usize, family: impl IntoIterator<Item = PointSet>) -> Self {
        let family = canonical(family.into_iter().collect());
        Self::assemble(n, family, None)
    }

    /// `n` points, every subset open.
    pub fn discrete(n: usize) -> Self {
        let opens = PointSet::full(n).subsets().collect();
        Self::assemble(n, canonical(opens), None)
    }

    /// `n` points, only `∅` and the whole set open.
    pub fn indiscrete(n: usize) -> Self {
        let opens = vec![PointSet::empty(n), PointSet::full(n)];
        Self::assemble(n, canonical(opens), None)
    }

    /// Opens `∅, {0}, {0,1}`.
    pub fn sierpinski() -> Self {
        let opens = vec![
            PointSet::empty(2),
            PointSet::singleton(2, 0),
            PointSet::full(2),
        ];
        Self::assemble(2, opens, None)
    }

    /// The one-point space; terminal in the category of spaces.
    pub fn point() -> Self {
        Self::discrete(1)
    }

    /// The space with no points; initial in the category of spaces.
    pub fn empty() -> Self {
        Self::discrete(0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    /// The subbase this space was generated from, when it was built by [`generate_topology`].
    pub fn subbase(&self) -> Option<&[PointSet]> {
        self.subbase.as_deref()
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.n)
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.n)
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        set.universe() == self.n && self.opens.binary_search(&set).is_ok()
    }

    pub fn is_closed(&self, set: PointSet) -> bool {
        set.universe() == self.n && self.is_open(set.complement())
    }

    /// The intersection of every open set containing `x`.
    pub fn minimal_neighborhood(&self, x: usize) -> PointSet {
        self.minimal[x]
    }

    pub fn minimal_neighborhoods(&self) -> &[PointSet] {
        &self.minimal
    }

    pub fn opens_containing(&self, x: usize) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().copied().filter(move |u| u.contains(x))
    }

    pub fn closed_sets(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().map(|u| u.complement())
    }

    pub(crate) fn check_set(&self, set: PointSet) -> Result<()> {
        set.ensure_universe(self.n)
    }
}

/// The smallest topology on `n` points containing every member of `subbase`.
///
/// An empty subbase yields the indiscrete topology. The minimal neighborhood
/// of `x` is the intersection of the subbase members containing it, and every
/// open set is a union of minimal neighborhoods; the open family is built by
/// closing `{∅}` under union with each of them.
pub fn generate_topology(n: usize, subbase: &[PointSet]) -> Result<FiniteSpace> {
    if n > crate::set::MAX_UNIVERSE {
        return Err(TopoError::Resource {
            what: "points",
            requested: n,
            cap: crate::set::MAX_UNIVERSE,
        });
    }
    for s in subbase {
        s.ensure_universe(n)?;
    }
    let minimal: Vec<PointSet> = (0..n)
        .map(|x| {
            subbase
                .iter()
                .filter(|s| s.contains(x))
                .fold(PointSet::full(n), |acc, s| acc.intersection(*s))
        })
        .collect();

    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut family = vec![PointSet::empty(n)];
    let mut gens: Vec<PointSet> = minimal.clone();
    gens.sort();
    gens.dedup();
    for g in gens {
        let len = family.len();
        for i in 0..len {
            let u = family[i].union(g);
            if seen.insert(u.bits()) {
                family.push(u);
            }
        }
    }
    if seen.insert(PointSet::full(n).bits()) {
        family.push(PointSet::full(n));
    }
    let family = canonical(family);
    let mut subbase = subbase.to_vec();
    subbase.sort();
    subbase.dedup();
    Ok(FiniteSpace::assemble(n, family, Some(subbase)))
}

/// Which topology axioms a family satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub contains_empty: bool,
    pub contains_full: bool,
    pub union_closed: bool,
    pub intersection_closed: bool,
}

impl AxiomReport {
    pub fn for_family(n: usize, family: &[PointSet]) -> Self {
        let members: HashSet<u64> = family.iter().map(|u| u.bits()).collect();
        let mut union_closed = true;
        let mut intersection_closed = true;
        for (i, a) in family.iter().enumerate() {
            for b in &family[i + 1..] {
                union_closed &= members.contains(&(a.bits() | b.bits()));
                intersection_closed &= members.contains(&(a.bits() & b.bits()));
            }
        }
        AxiomReport {
            contains_empty: members.contains(&0),
            contains_full: members.contains(&PointSet::full(n).bits()),
            union_closed,
            intersection_closed,
        }
    }

    pub fn holds(&self) -> bool {
        self.contains_empty && self.contains_full && self.union_closed && self.intersection_closed
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.contains_empty {
            out.push("opens do not contain the empty set");
        }
        if !self.contains_full {
            out.push("opens do not contain the full set");
        }
        if !self.union_closed {
            out.push("opens not closed under union");
        }
        if !self.intersection_closed {
            out.push("opens not closed under intersection");
        }
        out
    }
}

pub fn verify_axioms(space: &FiniteSpace) -> AxiomReport {
    AxiomReport::for_family(space.n(), space.opens())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubsetClass {
    pub is_closed: bool,
    pub is_discrete: bool,
    pub is_closed_discrete: bool,
}

/// Closedness and discreteness of `set`.
///
/// `set` is discrete when each member has an open neighborhood meeting `set`
/// only in that member. Testing the minimal neighborhood is enough: any open
/// witness contains it.
pub fn classify_subset(space: &FiniteSpace, set: PointSet) -> Result<SubsetClass> {
    space.check_set(set)?;
    Ok(classify_unchecked(space, set))
}

pub(crate) fn classify_unchecked(space: &FiniteSpace, set: PointSet) -> SubsetClass {
    let is_closed = space.is_closed(set);
    let is_discrete = is_discrete(space, set);
    SubsetClass {
        is_closed,
        is_discrete,
        is_closed_discrete: is_closed && is_discrete,
    }
}

#[inline]
pub(crate) fn is_discrete(space: &FiniteSpace, set: PointSet) -> bool {
    set.iter()
        .all(|s| space.minimal_neighborhood(s).intersection(set).bits() == 1 << s)
}

#[inline]
pub(crate) fn is_closed_discrete(space: &FiniteSpace, set: PointSet) -> bool {
    space.is_closed(set) && is_discrete(space, set)
}

/// The smallest closed superset of `set`: the points whose every neighborhood meets it.
pub fn closure(space: &FiniteSpace, set: PointSet) -> Result<PointSet> {
    space.check_set(set)?;
    let mut out = space.empty_set();
    for y in 0..space.n() {
        if space.minimal_neighborhood(y).intersects(set) {
            out = out.with(y);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub t0: bool,
    pub t1: bool,
}

pub fn separation_level(space: &FiniteSpace) -> Separation {
    let n = space.n();
    let t1 = (0..n).all(|x| space.is_closed(PointSet::singleton(n, x)));
    // Distinct neighborhood families ⟺ distinct minimal neighborhoods.
    let mut mins: Vec<u64> = space
        .minimal_neighborhoods()
        .iter()
        .map(|m| m.bits())
        .collect();
    mins.sort_unstable();
    mins.dedup();
    Separation {
        t0: mins.len() == n,
        t1,
    }
}

/// A subspace together with the table translating its points back to the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub space: FiniteSpace,
    /// `points[i]` is the parent index of subspace point `i`; increasing.
    pub points: Vec<usize>,
}

impl Subspace {
    /// Subspace index of parent point `x`, if `x` lies in the subspace.
    pub fn index_of(&self, x: usize) -> Option<usize> {
        self.points.binary_search(&x).ok()
    }

    /// Re-indexes a parent subset lying inside the subspace.
    pub fn restrict(&self, set: PointSet) -> PointSet {
        let mut out = PointSet::empty(self.points.len());
        for (i, &p) in self.points.iter().enumerate() {
            if set.contains(p) {
                out = out.with(i);
            }
        }
        out
    }

    /// Translates a subspace subset back to parent indices.
    pub fn lift(&self, set: PointSet, parent_n: usize) -> PointSet {
        let mut out = PointSet::empty(parent_n);
        for i in set.iter() {
            out = out.with(self.points[i]);
        }
        out
    }
}

/// The subspace topology on `set`: opens are traces `U ∩ set`, re-indexed to `0..|set|`.
pub fn subspace(space: &FiniteSpace, set: PointSet) -> Result<Subspace> {
    space.check_set(set)?;
    let points = set.to_vec();
    let mut sub = Subspace {
        space: FiniteSpace::empty(),
        points,
    };
    let traces: Vec<PointSet> = space
        .opens()
        .iter()
        .map(|u| sub.restrict(u.intersection(set)))
        .collect();
    sub.space = FiniteSpace::assemble(sub.points.len(), canonical(traces), None);
    Ok(sub)
}
