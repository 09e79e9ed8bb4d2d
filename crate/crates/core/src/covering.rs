//! Cardinal invariants and covering properties of finite spaces: extent,
//! Lindelöf degree, local/point finiteness, the companion-map witnesses for
//! paracompactness and metacompactness, κ-exclusiveness, aD, GLS and left
//! separation.

use itertools::Itertools;
use serde::Serialize;

use crate::assignment::{companion_map, neighborhood_assignments, SetAssignment};
use crate::caps::Caps;
use crate::error::{Result, TopoError};
use crate::set::PointSet;
use crate::space::{is_discrete, separation_level, FiniteSpace};

/// A duplicate-free family of open sets covering the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverFamily {
    space: FiniteSpace,
    members: Vec<PointSet>,
}

impl CoverFamily {
    pub fn new(space: &FiniteSpace, members: Vec<PointSet>) -> Result<Self> {
        let mut members = members;
        for m in &members {
            m.ensure_universe(space.n())?;
            if !space.is_open(*m) {
                return Err(TopoError::input(format!("cover member {m} is not open")));
            }
        }
        members.sort();
        members.dedup();
        let union = members
            .iter()
            .fold(space.empty_set(), |acc, m| acc.union(*m));
        if !union.is_full() {
            return Err(TopoError::input(format!(
                "family misses {}",
                union.complement()
            )));
        }
        Ok(CoverFamily {
            space: space.clone(),
            members,
        })
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }
}

/// Tri-state D verdict as recorded in a fingerprint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DStatus {
    Yes,
    No,
    UnknownSampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub t0: bool,
    pub t1: bool,
    pub extent: usize,
    pub lindelof_degree: usize,
    pub exclusiveness: usize,
    pub is_d: DStatus,
    pub is_ad: bool,
    /// `None` when the space is above the order-search cap.
    pub gls: Option<bool>,
    pub left_separated: Option<bool>,
    pub open_count: usize,
}

impl Fingerprint {
    pub fn invariant_violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.extent > self.lindelof_degree {
            v.push("extent exceeds Lindelöf degree");
        }
        if self.is_d == DStatus::Yes && self.extent != self.lindelof_degree {
            v.push("D-space with extent different from Lindelöf degree");
        }
        v
    }
}

/// Largest closed discrete subset. Every such set is closed, so only closed sets are scanned.
pub fn extent(space: &FiniteSpace) -> usize {
    space
        .closed_sets()
        .filter(|&c| is_discrete(space, c))
        .map(PointSet::len)
        .max()
        .unwrap_or(0)
}

/// Depth-first enumeration of irredundant open families: every member keeps a
/// private point no other member covers. `visit` sees each family that covers `X`.
fn irredundant_covers(space: &FiniteSpace, mut visit: impl FnMut(&[PointSet]) -> bool) {
    let opens: Vec<PointSet> = space
        .opens()
        .iter()
        .copied()
        .filter(|o| !o.is_empty())
        .collect();
    let mut chosen: Vec<PointSet> = Vec::new();
    let mut private: Vec<PointSet> = Vec::new();

    fn go(
        space: &FiniteSpace,
        opens: &[PointSet],
        start: usize,
        union: PointSet,
        chosen: &mut Vec<PointSet>,
        private: &mut Vec<PointSet>,
        visit: &mut dyn FnMut(&[PointSet]) -> bool,
    ) -> bool {
        if union.is_full() {
            return visit(chosen);
        }
        for i in start..opens.len() {
            let u = opens[i];
            let fresh = u.difference(union);
            if fresh.is_empty() || private.iter().any(|p| p.difference(u).is_empty()) {
                continue;
            }
            let saved = private.clone();
            for p in private.iter_mut() {
                *p = p.difference(u);
            }
            private.push(fresh);
            chosen.push(u);
            let keep_going = go(space, opens, i + 1, union.union(u), chosen, private, visit);
            chosen.pop();
            *private = saved;
            if !keep_going {
                return false;
            }
        }
        true
    }

    go(
        space,
        &opens,
        0,
        space.empty_set(),
        &mut chosen,
        &mut private,
        &mut visit,
    );
}

/// Largest irredundant open cover, which equals the least `κ` bounding a subcover of every cover.
pub fn lindelof_degree(space: &FiniteSpace) -> usize {
    let mut best = 0;
    irredundant_covers(space, |c| {
        best = best.max(c.len());
        true
    });
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointProfile {
    /// An open neighborhood `V_x` meeting as few members as possible.
    pub witness: PointSet,
    /// Indices of members meeting `V_x`.
    pub meeting: Vec<usize>,
    /// Number of members containing `x`.
    pub membership: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitenessProfile {
    pub points: Vec<PointProfile>,
}

impl FinitenessProfile {
    pub fn local_degree(&self) -> usize {
        self.points
            .iter()
            .map(|p| p.meeting.len())
            .max()
            .unwrap_or(0)
    }

    pub fn point_finite_degree(&self) -> usize {
        self.points.iter().map(|p| p.membership).max().unwrap_or(0)
    }
}

pub fn finiteness_profile(fam: &CoverFamily) -> FinitenessProfile {
    let space = &fam.space;
    let points = (0..space.n())
        .map(|x| {
            let meeting_of = |v: PointSet| -> Vec<usize> {
                fam.members
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.intersects(v))
                    .map(|(a, _)| a)
                    .collect()
            };
            let witness = space
                .opens_containing(x)
                .min_by_key(|&v| (meeting_of(v).len(), v))
                .expect("X is an open neighborhood");
            PointProfile {
                witness,
                meeting: meeting_of(witness),
                membership: fam.members.iter().filter(|m| m.contains(x)).count(),
            }
        })
        .collect();
    FinitenessProfile { points }
}

/// `⋃_{y ∈ N(x)} f_O(y) = { a : O(a) ∩ N(x) ≠ ∅ }` for every point.
pub fn companion_bound_identity(o: &SetAssignment, n: &SetAssignment) -> Result<bool> {
    if o.space() != n.space() {
        return Err(TopoError::input("assignments over different spaces"));
    }
    if !o.is_covering() {
        return Err(TopoError::precondition("O is not a covering assignment"));
    }
    n.require_neighborhood()?;
    let f = companion_map(o);
    Ok((0..n.space().n()).all(|x| {
        let nx = n.set(x);
        let meeting = (0..o.domain_size())
            .filter(|&a| o.set(a).intersects(nx))
            .fold(PointSet::empty(o.domain_size()), PointSet::with);
        f.union_over(nx) == meeting
    }))
}

#[derive(Debug, Clone)]
pub struct ParacompactWitness {
    /// Same index set as `C`, with `C_r(a) ⊆ C(a)`.
    pub c_r: SetAssignment,
    pub n: SetAssignment,
    /// `max_x |⋃ f_{C_r}(N(x))|`.
    pub bound: usize,
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct MetacompactWitness {
    pub c_r: SetAssignment,
    /// `max_x |f_{C_r}(x)|`.
    pub degree: usize,
    pub certified: bool,
}

fn require_covering(c: &SetAssignment) -> Result<()> {
    if c.is_covering() {
        Ok(())
    } else {
        Err(TopoError::precondition(format!(
            "C is not a covering assignment: {} uncovered",
            c.union_over(c.domain()).complement()
        )))
    }
}

/// Shrinks members one at a time to smaller opens while the family still covers and the
/// `(max, sum)` objective strictly drops; repeats until no single shrink helps.
fn shrink_greedily(
    c: &SetAssignment,
    objective: impl Fn(&SetAssignment) -> (usize, usize),
) -> SetAssignment {
    let space = c.space().clone();
    let mut current = c.clone();
    let mut score = objective(&current);
    loop {
        let mut improved = false;
        for a in 0..current.domain_size() {
            let inside: Vec<PointSet> = space
                .opens()
                .iter()
                .copied()
                .filter(|o| o.is_subset(current.set(a)) && *o != current.set(a))
                .collect();
            for v in inside {
                let mut sets = current.sets().to_vec();
                sets[a] = v;
                let cand = current.with_sets(sets);
                if !cand.is_covering() {
                    continue;
                }
                let s = objective(&cand);
                if s < score {
                    current = cand;
                    score = s;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            return current;
        }
    }
}

fn paracompact_bound(c: &SetAssignment, n: &SetAssignment) -> Vec<usize> {
    let f = companion_map(c);
    (0..n.space().n())
        .map(|x| f.union_over(n.set(x)).len())
        .collect()
}

pub fn paracompact_witness(c: &SetAssignment) -> Result<ParacompactWitness> {
    require_covering(c)?;
    let n = SetAssignment::minimal(c.space());
    let objective = |cand: &SetAssignment| {
        let b = paracompact_bound(cand, &n);
        (b.iter().copied().max().unwrap_or(0), b.iter().sum())
    };
    let c_r = shrink_greedily(c, objective);
    let bound = paracompact_bound(&c_r, &n).into_iter().max().unwrap_or(0);
    let certified = c_r.is_covering()
        && c_r
            .sets()
            .iter()
            .zip(c.sets())
            .all(|(r, o)| r.is_subset(*o))
        && n.is_neighborhood()
        && bound <= c.domain_size();
    Ok(ParacompactWitness {
        c_r,
        n,
        bound,
        certified,
    })
}

pub fn metacompact_witness(c: &SetAssignment) -> Result<MetacompactWitness> {
    require_covering(c)?;
    let degrees = |cand: &SetAssignment| -> Vec<usize> {
        companion_map(cand)
            .values()
            .iter()
            .map(|v| v.len())
            .collect()
    };
    let c_r = shrink_greedily(c, |cand| {
        let d = degrees(cand);
        (d.iter().copied().max().unwrap_or(0), d.iter().sum())
    });
    let degree = degrees(&c_r).into_iter().max().unwrap_or(0);
    let certified = c_r.is_covering()
        && c_r
            .sets()
            .iter()
            .zip(c.sets())
            .all(|(r, o)| r.is_subset(*o));
    Ok(MetacompactWitness {
        c_r,
        degree,
        certified,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Exclusiveness {
    /// Largest `k ≤ n` for which the neighborhood-subtraction definition holds.
    pub by_definition: usize,
    /// Largest `k ≤ n` for which every set of at most `k` points is closed.
    pub by_closed_sets: usize,
}

impl Exclusiveness {
    pub fn agree(&self) -> bool {
        self.by_definition == self.by_closed_sets
    }

    pub fn kappa(&self) -> usize {
        self.by_closed_sets
    }
}

/// For every `x`, open `U ∋ x` and `A ⊆ U \ {x}` with `|A| ≤ k`, some open `V ∋ x` avoids `A` inside `U`.
fn exclusive_by_definition(space: &FiniteSpace, k: usize) -> bool {
    (0..space.n()).all(|x| {
        space.opens_containing(x).all(|u| {
            u.without(x).subsets().filter(|a| a.len() <= k).all(|a| {
                space
                    .opens_containing(x)
                    .any(|v| v.is_subset(u.difference(a)))
            })
        })
    })
}

fn small_sets_closed(space: &FiniteSpace, k: usize) -> bool {
    space
        .full()
        .subsets()
        .filter(|a| a.len() <= k)
        .all(|a| space.is_closed(a))
}

/// Largest `κ` (capped at `n`, beyond which the condition cannot change) making the space κ-exclusive.
pub fn exclusiveness(space: &FiniteSpace) -> Exclusiveness {
    let largest =
        |test: &dyn Fn(usize) -> bool| (1..=space.n()).take_while(|&k| test(k)).last().unwrap_or(0);
    Exclusiveness {
        by_definition: largest(&|k| exclusive_by_definition(space, k)),
        by_closed_sets: largest(&|k| small_sets_closed(space, k)),
    }
}

/// Whether some discrete `A ⊆ F` and choice `a ∈ C(a) ∈ cover` covers `F`.
fn ad_witness(space: &FiniteSpace, f: PointSet, cover: &[PointSet]) -> bool {
    let mut by_size: Vec<PointSet> = f.subsets().collect();
    by_size.sort();
    by_size
        .into_iter()
        .filter(|&a| is_discrete(space, a))
        .any(|a| {
            let options: Vec<Vec<PointSet>> = a
                .iter()
                .map(|p| cover.iter().copied().filter(|c| c.contains(p)).collect())
                .collect();
            options
                .iter()
                .map(|o| o.iter())
                .multi_cartesian_product()
                .any(|choice| {
                    f.is_subset(
                        choice
                            .into_iter()
                            .fold(space.empty_set(), |acc, c| acc.union(*c)),
                    )
                })
                || (a.is_empty() && f.is_empty())
        })
}

/// For every closed `F` and every irredundant open cover, a discrete subset of `F`
/// selects members through its own points that cover `F`. `A` need not be closed.
pub fn is_ad(space: &FiniteSpace) -> bool {
    let closed: Vec<PointSet> = space.closed_sets().collect();
    let mut ok = true;
    irredundant_covers(space, |cover| {
        ok = closed.iter().all(|&f| ad_witness(space, f, cover));
        ok
    });
    ok
}

/// A reflexive relation, stored as `up[x] = ⇑x = { y : x ⪯ y }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlsRelation {
    pub up: Vec<PointSet>,
}

impl GlsRelation {
    pub fn relates(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// `m ∈ F` with no other `x ∈ F` satisfying `x ⪯ m`.
    pub fn minimal_in(&self, f: PointSet) -> Option<usize> {
        f.iter()
            .find(|&m| f.iter().all(|x| x == m || !self.relates(x, m)))
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.up
            .iter()
            .enumerate()
            .flat_map(|(x, u)| u.iter().map(move |y| (x, y)))
            .collect()
    }

    /// Both GLS conditions, checked from scratch.
    pub fn validates(&self, space: &FiniteSpace) -> bool {
        self.up
            .iter()
            .enumerate()
            .all(|(x, u)| u.contains(x) && space.is_open(*u))
            && space
                .closed_sets()
                .filter(|c| !c.is_empty())
                .all(|c| self.minimal_in(c).is_some())
    }
}

fn order_cap(space: &FiniteSpace, caps: &Caps) -> Result<()> {
    if space.n() > caps.order_search {
        return Err(TopoError::Resource {
            what: "points for order search",
            requested: space.n(),
            cap: caps.order_search,
        });
    }
    Ok(())
}

/// Searches GLS relations. A reflexive relation with open up-sets is exactly a
/// choice of open `⇑x ∋ x` per point, so candidates are the neighborhood assignments.
pub fn gls_search(space: &FiniteSpace, caps: &Caps) -> Result<Option<GlsRelation>> {
    order_cap(space, caps)?;
    let closed: Vec<PointSet> = space.closed_sets().filter(|c| !c.is_empty()).collect();
    Ok(neighborhood_assignments(space)
        .map(|n| GlsRelation {
            up: n.sets().to_vec(),
        })
        .find(|r| closed.iter().all(|&c| r.minimal_in(c).is_some())))
}

/// Searches orderings (first to last, lexicographic over permutations) whose final segments are open.
pub fn left_separated_search(space: &FiniteSpace, caps: &Caps) -> Result<Option<Vec<usize>>> {
    order_cap(space, caps)?;
    let n = space.n();
    Ok((0..n).permutations(n).find(|order| {
        let mut tail = space.empty_set();
        order.iter().rev().all(|&x| {
            tail = tail.with(x);
            space.is_open(tail)
        })
    }))
}

/// The well-order of a left-separated witness as a GLS relation.
pub fn order_as_relation(n: usize, order: &[usize]) -> GlsRelation {
    let up = (0..n)
        .map(|x| {
            let pos = order
                .iter()
                .position(|&p| p == x)
                .expect("order is a permutation");
            order[pos..]
                .iter()
                .fold(PointSet::empty(n), |acc, &y| acc.with(y))
        })
        .collect();
    GlsRelation { up }
}

/// T1 via the separation query, exposed here for the exclusiveness corollary.
pub fn is_t1(space: &FiniteSpace) -> bool {
    separation_level(space).t1
}
