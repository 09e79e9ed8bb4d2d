//! Open set assignments, their companion maps into the power-set space, and
//! the refinement/kernel vocabulary built on top of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::caps::Caps;
use crate::category::ContinuousMap;
use crate::error::{Result, TopoError};
use crate::puf::{compress, puf_target};
use crate::set::PointSet;
use crate::space::{self, FiniteSpace};

/// An indexed family `a ↦ O(a)` of open sets.
///
/// The index set is either abstract (`{0..m}`) or the points of the space
/// itself; only the latter can be a neighborhood assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetAssignment {
    space: FiniteSpace,
    sets: Vec<PointSet>,
    by_points: bool,
}

impl SetAssignment {
    /// An assignment over the abstract index set `{0..sets.len()}`.
    pub fn new(space: &FiniteSpace, sets: Vec<PointSet>) -> Result<Self> {
        for (a, s) in sets.iter().enumerate() {
            s.ensure_universe(space.n())?;
            if !space.is_open(*s) {
                return Err(TopoError::input(format!(
                    "assigned set {a} = {s} is not open"
                )));
            }
        }
        Ok(SetAssignment {
            space: space.clone(),
            sets,
            by_points: false,
        })
    }

    /// An assignment indexed by the points of the space.
    pub fn on_points(space: &FiniteSpace, sets: Vec<PointSet>) -> Result<Self> {
        if sets.len() != space.n() {
            return Err(TopoError::input(format!(
                "an assignment on the points needs {} sets, got {}",
                space.n(),
                sets.len()
            )));
        }
        let mut a = Self::new(space, sets)?;
        a.by_points = true;
        Ok(a)
    }

    /// Like [`SetAssignment::on_points`], additionally requiring `x ∈ N(x)` for every point.
    pub fn neighborhood(space: &FiniteSpace, sets: Vec<PointSet>) -> Result<Self> {
        let n = Self::on_points(space, sets)?;
        n.require_neighborhood()?;
        Ok(n)
    }

    /// `N(x) = ` the minimal open neighborhood of `x`.
    pub fn minimal(space: &FiniteSpace) -> Self {
        SetAssignment {
            space: space.clone(),
            sets: space.minimal_neighborhoods().to_vec(),
            by_points: true,
        }
    }

    /// `N(x) = X` for every point.
    pub fn total(space: &FiniteSpace) -> Self {
        SetAssignment {
            space: space.clone(),
            sets: vec![space.full(); space.n()],
            by_points: true,
        }
    }

    pub fn indexed_by_points(&self) -> bool {
        self.by_points
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }

    pub fn set(&self, a: usize) -> PointSet {
        self.sets[a]
    }

    pub fn domain_size(&self) -> usize {
        self.sets.len()
    }

    pub fn domain(&self) -> PointSet {
        PointSet::full(self.sets.len())
    }

    /// Union of the assigned sets over an index subset.
    pub fn union_over(&self, indices: PointSet) -> PointSet {
        indices
            .iter()
            .fold(self.space.empty_set(), |acc, a| acc.union(self.sets[a]))
    }

    pub fn is_covering(&self) -> bool {
        self.union_over(self.domain()).is_full()
    }

    pub fn is_neighborhood(&self) -> bool {
        self.by_points
            && self.sets.len() == self.space.n()
            && self.sets.iter().enumerate().all(|(x, s)| s.contains(x))
    }

    pub(crate) fn require_neighborhood(&self) -> Result<()> {
        if !self.by_points {
            return Err(TopoError::precondition(
                "the assignment is not indexed by the points of the space",
            ));
        }
        if self.sets.len() != self.space.n() {
            return Err(TopoError::precondition(format!(
                "a neighborhood assignment needs {} sets, got {}",
                self.space.n(),
                self.sets.len()
            )));
        }
        match self.sets.iter().enumerate().find(|(x, s)| !s.contains(*x)) {
            Some((x, s)) => Err(TopoError::precondition(format!(
                "point {x} is not in its assigned set {s}"
            ))),
            None => Ok(()),
        }
    }

    /// Same space and index kind, new sets (already known to be open).
    pub(crate) fn with_sets(&self, sets: Vec<PointSet>) -> Self {
        SetAssignment {
            space: self.space.clone(),
            sets,
            by_points: self.by_points,
        }
    }
}

/// Every neighborhood assignment of a space, odometer order with point 0 fastest.
pub fn neighborhood_assignments(space: &FiniteSpace) -> impl Iterator<Item = SetAssignment> + '_ {
    let choices: Vec<Vec<PointSet>> = (0..space.n())
        .map(|x| space.opens_containing(x).collect())
        .collect();
    assignments_from_choices(space, choices, true)
}

/// Every assignment of `m` open sets.
pub fn all_assignments(space: &FiniteSpace, m: usize) -> impl Iterator<Item = SetAssignment> + '_ {
    assignments_from_choices(space, vec![space.opens().to_vec(); m], false)
}

fn assignments_from_choices(
    space: &FiniteSpace,
    choices: Vec<Vec<PointSet>>,
    by_points: bool,
) -> impl Iterator<Item = SetAssignment> + '_ {
    let mut idx = vec![0usize; choices.len()];
    let mut done = choices.iter().any(|c| c.is_empty());
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let sets = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        let mut k = 0;
        loop {
            if k == idx.len() {
                done = true;
                break;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        Some(SetAssignment {
            space: space.clone(),
            sets,
            by_points,
        })
    })
}

/// `x ↦ { a : x ∈ O(a) }`, with the checks that make it the companion of its assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanionMap {
    space: FiniteSpace,
    domain_size: usize,
    values: Vec<PointSet>,
    preimage_identity: bool,
    continuous: bool,
}

impl CompanionMap {
    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn values(&self) -> &[PointSet] {
        &self.values
    }

    pub fn value(&self, x: usize) -> PointSet {
        self.values[x]
    }

    /// `{ x : a ∈ f(x) }`: the preimage of the subbasic set `U(a)`.
    pub fn preimage(&self, a: usize) -> PointSet {
        (0..self.space.n())
            .filter(|&x| self.values[x].contains(a))
            .fold(self.space.empty_set(), PointSet::with)
    }

    /// Points sent to the empty subset.
    pub fn empty_fiber(&self) -> PointSet {
        (0..self.space.n())
            .filter(|&x| self.values[x].is_empty())
            .fold(self.space.empty_set(), PointSet::with)
    }

    /// Preimage identity and continuity both verified.
    pub fn certified(&self) -> bool {
        self.preimage_identity && self.continuous
    }

    pub fn preimage_identity(&self) -> bool {
        self.preimage_identity
    }

    pub fn continuous(&self) -> bool {
        self.continuous
    }

    /// The companion as a map into the power-set space on the index set.
    pub fn to_map(&self, caps: &Caps) -> Result<ContinuousMap> {
        let target = puf_target(self.domain_size, caps)?;
        ContinuousMap::new(
            self.space.clone(),
            target,
            self.values.iter().map(|v| v.bits() as usize).collect(),
        )
    }

    /// Union of `f(y)` over `y ∈ s`.
    pub fn union_over(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::empty(self.domain_size), |acc, y| {
            acc.union(self.values[y])
        })
    }
}

pub fn companion_map(assignment: &SetAssignment) -> CompanionMap {
    let n = assignment.space.n();
    let m = assignment.domain_size();
    let values: Vec<PointSet> = (0..n)
        .map(|x| {
            (0..m)
                .filter(|&a| assignment.sets[a].contains(x))
                .fold(PointSet::empty(m), PointSet::with)
        })
        .collect();
    let mut f = CompanionMap {
        space: assignment.space.clone(),
        domain_size: m,
        values,
        preimage_identity: false,
        continuous: false,
    };
    f.preimage_identity = (0..m).all(|a| f.preimage(a) == assignment.sets[a]);
    // Continuity into a subbase-generated topology: subbasic preimages are open.
    f.continuous = (0..m).all(|a| assignment.space.is_open(f.preimage(a)));
    f
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AssignmentKind {
    Set,
    Covering,
    Neighborhood,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub kind: AssignmentKind,
    /// Union of the assigned sets is `X`.
    pub covering: bool,
    /// The companion never takes the value `∅`.
    pub covering_via_companion: bool,
    /// `f⁻¹(⋃_a U(a)) = X`.
    pub preimage_of_nonempty_is_full: bool,
    /// `f⁻¹({∅}) = ∅`.
    pub empty_fiber_is_empty: bool,
    pub neighborhood: bool,
    /// `x ∈ f(x)` for every point (with `m = n`).
    pub neighborhood_via_companion: bool,
    pub uncovered: Vec<usize>,
}

impl Classification {
    pub fn routes_agree(&self) -> bool {
        self.covering == self.covering_via_companion
            && self.covering == self.preimage_of_nonempty_is_full
            && self.covering == self.empty_fiber_is_empty
            && self.neighborhood == self.neighborhood_via_companion
    }
}

pub fn classify_assignment(assignment: &SetAssignment) -> Classification {
    let f = companion_map(assignment);
    let n = assignment.space.n();
    let m = assignment.domain_size();
    let covering = assignment.is_covering();
    let neighborhood = assignment.is_neighborhood();
    let nonempty_codes_preimage = (0..m)
        .map(|a| f.preimage(a))
        .fold(assignment.space.empty_set(), PointSet::union);
    let neighborhood_via_companion =
        assignment.by_points && m == n && (0..n).all(|x| f.value(x).contains(x));
    let kind = if neighborhood {
        AssignmentKind::Neighborhood
    } else if covering {
        AssignmentKind::Covering
    } else {
        AssignmentKind::Set
    };
    Classification {
        kind,
        covering,
        covering_via_companion: f.values.iter().all(|v| !v.is_empty()),
        preimage_of_nonempty_is_full: nonempty_codes_preimage.is_full(),
        empty_fiber_is_empty: f.empty_fiber().is_empty(),
        neighborhood,
        neighborhood_via_companion,
        uncovered: assignment
            .union_over(assignment.domain())
            .complement()
            .to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub regime: Regime,
    pub candidates_checked: u64,
    /// Candidates satisfying every preimage identity (exhaustive regime) or
    /// sampled non-companion candidates that wrongly satisfied them (sampled regime).
    pub satisfying: u64,
    /// The satisfying candidate, if exactly one, equals the companion.
    pub matches_companion: bool,
}

impl UniquenessReport {
    pub fn holds(&self) -> bool {
        match self.regime {
            Regime::Exhaustive => self.satisfying == 1 && self.matches_companion,
            Regime::Sampled => self.satisfying == 0 && self.matches_companion,
        }
    }
}

const UNIQUENESS_SAMPLES: u64 = 4096;

/// Every function `X → P(A)` (or a seeded sample when there are more than
/// `exhaustive_cap`) is tested against the preimage identities.
pub fn verify_companion_unique(
    assignment: &SetAssignment,
    exhaustive_cap: u64,
    seed: u64,
) -> UniquenessReport {
    let n = assignment.space.n();
    let m = assignment.domain_size();
    let targets: Vec<u64> = assignment.sets.iter().map(|s| s.bits()).collect();
    let companion: Vec<u64> = companion_map(assignment)
        .values
        .iter()
        .map(|v| v.bits())
        .collect();
    let satisfies = |cand: &[u64]| {
        (0..m).all(|a| {
            let pre = cand
                .iter()
                .enumerate()
                .filter(|(_, &c)| c >> a & 1 == 1)
                .fold(0u64, |acc, (x, _)| acc | 1 << x);
            pre == targets[a]
        })
    };
    let total = (m as u32)
        .checked_mul(n as u32)
        .filter(|&b| b < 64)
        .map(|b| 1u64 << b);
    match total {
        Some(total) if total <= exhaustive_cap => {
            let mask = if m == 0 { 0 } else { (1u64 << m) - 1 };
            let mut satisfying = 0;
            let mut found = None;
            let mut cand = vec![0u64; n];
            for c in 0..total {
                for (x, slot) in cand.iter_mut().enumerate() {
                    *slot = c >> (m * x) & mask;
                }
                if satisfies(&cand) {
                    satisfying += 1;
                    found = Some(cand.clone());
                }
            }
            UniquenessReport {
                regime: Regime::Exhaustive,
                candidates_checked: total,
                satisfying,
                matches_companion: found.as_deref() == Some(companion.as_slice()),
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mask = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
            let mut checked = 0;
            let mut satisfying = 0;
            while checked < UNIQUENESS_SAMPLES {
                let cand: Vec<u64> = (0..n).map(|_| rng.gen::<u64>() & mask).collect();
                if cand == companion {
                    continue;
                }
                checked += 1;
                if satisfies(&cand) {
                    satisfying += 1;
                }
            }
            UniquenessReport {
                regime: Regime::Sampled,
                candidates_checked: checked,
                satisfying,
                matches_companion: satisfies(&companion),
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Restriction {
    /// The assignment over `D`, re-indexed in increasing order of `D`.
    pub assignment: SetAssignment,
    pub d: PointSet,
    /// `g(x) = f(x) ∩ D`, over the original index set.
    pub trace: Vec<PointSet>,
    /// The restriction's own companion equals the re-indexed trace.
    pub trace_agrees: bool,
    pub covering: bool,
    /// `g` never takes the value `∅`.
    pub covering_via_trace: bool,
}

pub fn restrict_assignment(assignment: &SetAssignment, d: PointSet) -> Result<Restriction> {
    d.ensure_universe(assignment.domain_size())?;
    let f = companion_map(assignment);
    let restricted = SetAssignment {
        space: assignment.space.clone(),
        sets: d.iter().map(|a| assignment.sets[a]).collect(),
        by_points: false,
    };
    let trace: Vec<PointSet> = f.values.iter().map(|v| v.intersection(d)).collect();
    let own = companion_map(&restricted);
    let trace_agrees = own
        .values
        .iter()
        .zip(&trace)
        .all(|(o, t)| o.bits() == compress(t.bits(), d));
    Ok(Restriction {
        covering: restricted.is_covering(),
        covering_via_trace: trace.iter().all(|t| !t.is_empty()),
        assignment: restricted,
        d,
        trace,
        trace_agrees,
    })
}

/// `⋃ N(D) = X`. Closed discreteness is a separate question.
pub fn is_kernel(n: &SetAssignment, d: PointSet) -> Result<bool> {
    n.require_neighborhood()?;
    d.ensure_universe(n.domain_size())?;
    Ok(n.union_over(d).is_full())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RefinementCheck {
    /// `candidate(a) ⊆ base(a)` for every index.
    pub direct: bool,
    /// `f_candidate(x) ⊆ f_base(x)` for every point.
    pub via_companion: bool,
    /// The candidate is moreover a neighborhood assignment.
    pub neighborhood: bool,
}

impl RefinementCheck {
    pub fn routes_agree(&self) -> bool {
        self.direct == self.via_companion
    }
}

pub fn is_refinement(candidate: &SetAssignment, base: &SetAssignment) -> Result<RefinementCheck> {
    if candidate.space != base.space || candidate.domain_size() != base.domain_size() {
        return Err(TopoError::input(
            "refinement check between assignments of different shapes",
        ));
    }
    let direct = candidate
        .sets
        .iter()
        .zip(&base.sets)
        .all(|(c, b)| c.is_subset(*b));
    let fc = companion_map(candidate);
    let fb = companion_map(base);
    let via_companion = fc
        .values
        .iter()
        .zip(&fb.values)
        .all(|(c, b)| c.is_subset(*b));
    Ok(RefinementCheck {
        direct,
        via_companion,
        neighborhood: direct && candidate.is_neighborhood(),
    })
}

/// `N*(d) = N(d) \ (D \ {d})` on a closed discrete kernel `D`, `N*(x) = N(x)` elsewhere.
pub fn puncture_refinement(n: &SetAssignment, d: PointSet) -> Result<SetAssignment> {
    n.require_neighborhood()?;
    let class = space::classify_subset(&n.space, d)?;
    if !class.is_closed_discrete {
        let why = match (class.is_closed, class.is_discrete) {
            (false, false) => "neither closed nor discrete",
            (false, true) => "not closed",
            _ => "not discrete",
        };
        return Err(TopoError::precondition(format!("{d} is {why}")));
    }
    if !is_kernel(n, d)? {
        return Err(TopoError::precondition(format!("{d} is not a kernel")));
    }
    let sets = (0..n.space.n())
        .map(|x| {
            if d.contains(x) {
                n.sets[x].difference(d.without(x))
            } else {
                n.sets[x]
            }
        })
        .collect();
    SetAssignment::neighborhood(&n.space, sets)
}

/// `D` is closed discrete and every `x` with `U(x) ∩ D ≠ ∅` lies in `⋃ U(D)`.
pub fn is_u_sticky(u: &SetAssignment, d: PointSet) -> Result<bool> {
    u.require_neighborhood()?;
    if !space::classify_subset(&u.space, d)?.is_closed_discrete {
        return Ok(false);
    }
    let covered = u.union_over(d);
    Ok((0..u.space.n()).all(|x| !u.sets[x].intersects(d) || covered.contains(x)))
}

/// `D ⪯_U D2`: `D ⊆ D2` and `(D2 \ D) ∩ ⋃ U(D) = ∅`.
pub fn sticky_order(u: &SetAssignment, d: PointSet, d2: PointSet) -> Result<bool> {
    for s in [d, d2] {
        if !is_u_sticky(u, s)? {
            return Err(TopoError::precondition(format!("{s} is not sticky")));
        }
    }
    Ok(d.is_subset(d2) && !d2.difference(d).intersects(u.union_over(d)))
}
