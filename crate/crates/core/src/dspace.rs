//! Deciding the D-property: kernel search, exhaustive and sampled checks, the
//! greedy kernel recursion, the kernel lemmas, and the companion-map
//! characterization in its pullback form.

use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assignment::{
    companion_map, is_kernel, neighborhood_assignments, puncture_refinement, CompanionMap,
    SetAssignment,
};
use crate::caps::Caps;
use crate::category::{coslice_commute, is_mono, pullback, ContinuousMap, CosliceReport, Pullback};
use crate::covering::DStatus;
use crate::error::{Result, TopoError};
use crate::puf::{compress, puf_target, trace_map};
use crate::set::{subsets_by_size, PointSet};
use crate::space::{classify_subset, is_closed_discrete, separation_level, subspace, FiniteSpace};

/// `∏_x |{ U open : x ∈ U }|`.
pub fn neighborhood_assignment_count(space: &FiniteSpace) -> u128 {
    (0..space.n())
        .map(|x| space.opens_containing(x).count() as u128)
        .product()
}

/// Smallest closed discrete kernel, ties broken by lowest member list.
pub fn kernel_search(n: &SetAssignment) -> Result<Option<PointSet>> {
    n.require_neighborhood()?;
    let space = n.space();
    Ok(subsets_by_size(space.n())
        .find(|&d| n.union_over(d).is_full() && is_closed_discrete(space, d)))
}

#[derive(Debug, Clone, Serialize)]
pub struct DVerdict {
    pub status: DStatus,
    /// One closed discrete kernel per checked assignment (only when every check succeeded).
    pub witnesses: Vec<PointSet>,
    /// Sets of an assignment with no closed discrete kernel.
    pub counterexample: Option<Vec<PointSet>>,
    pub assignments_checked: u128,
    pub assignments_total: u128,
}

/// Exhaustive over all neighborhood assignments when there are at most `cap`;
/// otherwise `cap` seeded random assignments, which can refute but not certify.
pub fn dspace_check(space: &FiniteSpace, cap: u128, seed: u64) -> DVerdict {
    let total = neighborhood_assignment_count(space);
    let mut witnesses = Vec::new();
    let mut checked = 0u128;
    let mut examine = |n: SetAssignment, witnesses: &mut Vec<PointSet>| -> Option<Vec<PointSet>> {
        checked += 1;
        match kernel_search(&n).expect("enumerated assignments are neighborhood assignments") {
            Some(d) => {
                witnesses.push(d);
                None
            }
            None => Some(n.sets().to_vec()),
        }
    };
    if total <= cap {
        for n in neighborhood_assignments(space) {
            if let Some(bad) = examine(n, &mut witnesses) {
                return DVerdict {
                    status: DStatus::No,
                    witnesses: Vec::new(),
                    counterexample: Some(bad),
                    assignments_checked: checked,
                    assignments_total: total,
                };
            }
        }
        return DVerdict {
            status: DStatus::Yes,
            witnesses,
            counterexample: None,
            assignments_checked: checked,
            assignments_total: total,
        };
    }
    let choices: Vec<Vec<PointSet>> = (0..space.n())
        .map(|x| space.opens_containing(x).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cap {
        let sets = choices
            .iter()
            .map(|c| c[rng.gen_range(0..c.len())])
            .collect();
        let n = SetAssignment::neighborhood(space, sets)
            .expect("sampled from opens containing each point");
        if let Some(bad) = examine(n, &mut witnesses) {
            return DVerdict {
                status: DStatus::No,
                witnesses: Vec::new(),
                counterexample: Some(bad),
                assignments_checked: checked,
                assignments_total: total,
            };
        }
    }
    DVerdict {
        status: DStatus::UnknownSampled,
        witnesses: Vec::new(),
        counterexample: None,
        assignments_checked: checked,
        assignments_total: total,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyStep {
    pub pick: usize,
    /// `N(x)` before the puncture.
    pub before: PointSet,
    /// The kernel built so far, before adding `pick`.
    pub removed: PointSet,
    pub after: PointSet,
    pub covered: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyOutcome {
    pub order: Vec<usize>,
    pub steps: Vec<GreedyStep>,
    pub kernel: PointSet,
    /// The final refinement (a point's set is only changed when it is picked).
    pub refinement: Vec<PointSet>,
    pub closed: bool,
    pub discrete: bool,
    pub covers: bool,
    /// Every refined set is open and still contains its point.
    pub refinement_open: bool,
}

impl GreedyOutcome {
    pub fn success(&self) -> bool {
        self.closed && self.discrete && self.covers && self.refinement_open
    }

    pub fn failure_reason(&self) -> Option<String> {
        let mut why = Vec::new();
        if !self.closed {
            why.push(format!("{} is not closed", self.kernel));
        }
        if !self.discrete {
            why.push(format!("{} is not discrete", self.kernel));
        }
        if !self.covers {
            why.push("the refined sets do not cover".to_string());
        }
        if !self.refinement_open {
            why.push("a refined set is not open".to_string());
        }
        (!why.is_empty()).then(|| why.join("; "))
    }
}

impl fmt::Display for GreedyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "greedy order {:?}", self.order)?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "step {}: pick {}, N({}) \\ {} = {} -> {}, covered {}",
                i + 1,
                s.pick,
                s.pick,
                s.removed,
                s.before,
                s.after,
                s.covered
            )?;
        }
        write!(
            f,
            "kernel {}: closed={} discrete={} covers={} refinement_open={}",
            self.kernel, self.closed, self.discrete, self.covers, self.refinement_open
        )?;
        match self.failure_reason() {
            Some(why) => write!(f, "\nfailure: {why}"),
            None => write!(f, "\nsuccess"),
        }
    }
}

fn check_order(n: usize, order: &[usize]) -> Result<()> {
    let mut seen = PointSet::empty(n);
    for &x in order {
        if x >= n || seen.contains(x) {
            return Err(TopoError::input(format!(
                "{order:?} is not a permutation of {n} points"
            )));
        }
        seen = seen.with(x);
    }
    if order.len() != n {
        return Err(TopoError::input(format!(
            "{order:?} is not a permutation of {n} points"
        )));
    }
    Ok(())
}

/// Repeatedly picks the first uncovered point in `order`, adds it to `D` and
/// punctures its set by the previous `D`; stops once the refined sets of `D` cover.
pub fn greedy_kernel(n: &SetAssignment, order: &[usize]) -> Result<GreedyOutcome> {
    n.require_neighborhood()?;
    let space = n.space();
    check_order(space.n(), order)?;
    let mut refinement = n.sets().to_vec();
    let mut d = space.empty_set();
    let mut covered = space.empty_set();
    let mut steps = Vec::new();
    while let Some(&x) = order.iter().find(|&&x| !covered.contains(x)) {
        let before = refinement[x];
        let after = before.difference(d);
        refinement[x] = after;
        steps.push(GreedyStep {
            pick: x,
            before,
            removed: d,
            after,
            covered: covered.union(after),
        });
        d = d.with(x);
        covered = covered.union(after);
    }
    let class = classify_subset(space, d)?;
    let refinement_open = refinement
        .iter()
        .enumerate()
        .all(|(x, s)| s.contains(x) && space.is_open(*s));
    Ok(GreedyOutcome {
        order: order.to_vec(),
        steps,
        kernel: d,
        covers: d
            .iter()
            .fold(space.empty_set(), |acc, x| acc.union(refinement[x]))
            .is_full(),
        refinement,
        closed: class.is_closed,
        discrete: class.is_discrete,
        refinement_open,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AllOrdersOutcome {
    /// The lexicographically first succeeding order's outcome.
    pub first_success: Option<GreedyOutcome>,
    pub orders_tried: usize,
    pub successes: usize,
    /// Set when every order fails although a closed discrete kernel exists.
    pub finding: Option<String>,
}

impl AllOrdersOutcome {
    pub fn all_succeed(&self) -> bool {
        self.successes == self.orders_tried
    }
}

pub fn greedy_kernel_all_orders(n: &SetAssignment, caps: &Caps) -> Result<AllOrdersOutcome> {
    n.require_neighborhood()?;
    let size = n.space().n();
    if size > caps.order_search {
        return Err(TopoError::Resource {
            what: "points for all-orders greedy",
            requested: size,
            cap: caps.order_search,
        });
    }
    let mut first_success = None;
    let mut orders_tried = 0;
    let mut successes = 0;
    for order in (0..size).permutations(size) {
        let out = greedy_kernel(n, &order)?;
        orders_tried += 1;
        if out.success() {
            successes += 1;
            first_success.get_or_insert(out);
        }
    }
    let finding = match (&first_success, kernel_search(n)?) {
        (None, Some(k)) => Some(format!(
            "no order succeeds, but {k} is a closed discrete kernel"
        )),
        _ => None,
    };
    Ok(AllOrdersOutcome {
        first_success,
        orders_tried,
        successes,
        finding,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForcedPoints {
    pub points: PointSet,
    /// Every kernel of `N` (closed discrete or not) contains the forced points.
    pub in_every_kernel: bool,
    /// Same for every kernel of every neighborhood refinement of `N` that was checked.
    pub in_every_refinement_kernel: bool,
    pub refinements_checked: usize,
}

const REFINEMENT_LIMIT: usize = 4096;

/// Points `d` for which `N(d)` is the only assigned set containing `d`.
pub fn forced_points(n: &SetAssignment) -> Result<ForcedPoints> {
    n.require_neighborhood()?;
    let space = n.space();
    let forced_of = |sets: &[PointSet]| {
        (0..space.n())
            .filter(|&d| {
                sets.iter()
                    .enumerate()
                    .all(|(x, s)| x == d || !s.contains(d))
            })
            .fold(space.empty_set(), PointSet::with)
    };
    let points = forced_of(n.sets());
    let all_kernels_contain = |sets: &[PointSet]| {
        space.full().subsets().all(|k| {
            let covers = k
                .iter()
                .fold(space.empty_set(), |acc, x| acc.union(sets[x]))
                .is_full();
            !covers || points.is_subset(k)
        })
    };
    let in_every_kernel = all_kernels_contain(n.sets());
    let choices: Vec<Vec<PointSet>> = (0..space.n())
        .map(|x| {
            space
                .opens_containing(x)
                .filter(|o| o.is_subset(n.set(x)))
                .collect()
        })
        .collect();
    let mut refinements_checked = 0;
    let mut in_every_refinement_kernel = true;
    for sets in choices
        .iter()
        .map(|c| c.iter().copied())
        .multi_cartesian_product()
        .take(REFINEMENT_LIMIT)
    {
        refinements_checked += 1;
        in_every_refinement_kernel &= all_kernels_contain(&sets);
    }
    if space.n() == 0 {
        refinements_checked = 1;
    }
    Ok(ForcedPoints {
        points,
        in_every_kernel,
        in_every_refinement_kernel,
        refinements_checked,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub t1: bool,
    pub kernel: bool,
    /// `d ∉ N(x)` for distinct `d, x ∈ D`.
    pub separated: bool,
    pub applicable: bool,
    pub closed: bool,
    pub discrete: bool,
}

impl CriterionReport {
    /// When the lemma applies, its conclusion holds.
    pub fn consistent(&self) -> bool {
        !self.applicable || (self.closed && self.discrete)
    }
}

pub fn closed_discrete_criterion(n: &SetAssignment, d: PointSet) -> Result<CriterionReport> {
    n.require_neighborhood()?;
    let space = n.space();
    let class = classify_subset(space, d)?;
    let t1 = separation_level(space).t1;
    let kernel = is_kernel(n, d)?;
    let separated = d
        .iter()
        .all(|x| n.set(x).intersection(d) == PointSet::singleton(space.n(), x));
    Ok(CriterionReport {
        t1,
        kernel,
        separated,
        applicable: t1 && kernel && separated,
        closed: class.is_closed,
        discrete: class.is_discrete,
    })
}

#[derive(Debug, Clone)]
pub struct CharacterizationWitness {
    pub d: PointSet,
    pub n_star: SetAssignment,
    pub f_star: CompanionMap,
    /// `g(x) = f*(x) ∩ D`, over the index set `X`.
    pub g: Vec<PointSet>,
    pub never_empty: bool,
    pub singletons_on_d: bool,
}

impl CharacterizationWitness {
    pub fn holds(&self) -> bool {
        self.never_empty && self.singletons_on_d && self.f_star.certified()
    }
}

/// Punctures `N` along its smallest closed discrete kernel and traces the refined companion onto it.
pub fn characterization_witness(n: &SetAssignment) -> Result<Option<CharacterizationWitness>> {
    let Some(d) = kernel_search(n)? else {
        return Ok(None);
    };
    let n_star = puncture_refinement(n, d)?;
    let f_star = companion_map(&n_star);
    let g: Vec<PointSet> = f_star.values().iter().map(|v| v.intersection(d)).collect();
    let size = n.space().n();
    Ok(Some(CharacterizationWitness {
        never_empty: g.iter().all(|v| !v.is_empty()),
        singletons_on_d: d.iter().all(|x| g[x] == PointSet::singleton(size, x)),
        d,
        n_star,
        f_star,
        g,
    }))
}

#[derive(Debug, Clone)]
pub struct PullbackDiagonal {
    pub pullback: Pullback,
    /// Carrier pairs `(x, d)` with `x ∈ X`, `d ∈ D`, in original point labels.
    pub carrier: Vec<(usize, usize)>,
    pub contains_diagonal: bool,
    pub singleton_mono: bool,
    pub singleton_continuous: bool,
    pub g_continuous: bool,
}

impl PullbackDiagonal {
    pub fn holds(&self) -> bool {
        self.contains_diagonal
            && self.singleton_mono
            && self.singleton_continuous
            && self.g_continuous
    }
}

/// Builds `g: X → P(D)` and `𝓘: D → P(D)`, `d ↦ {d}`, takes their pullback and checks `Δ(D)` lies in it.
pub fn pullback_diagonal_check(
    w: &CharacterizationWitness,
    caps: &Caps,
) -> Result<PullbackDiagonal> {
    let space = w.n_star.space();
    if w.g.len() != space.n() || w.d.universe() != space.n() {
        return Err(TopoError::input("witness does not match its space"));
    }
    let target = puf_target(w.d.len(), caps)?;
    let g = ContinuousMap::new(
        space.clone(),
        target.clone(),
        w.g.iter()
            .map(|v| compress(v.bits(), w.d) as usize)
            .collect(),
    )?;
    let sub = subspace(space, w.d)?;
    let singleton = ContinuousMap::new(
        sub.space.clone(),
        target,
        (0..w.d.len()).map(|i| 1 << i).collect(),
    )?;
    let singleton_continuous = singleton.is_certified();
    let singleton_mono = singleton_continuous && is_mono(&singleton)?.concrete;
    let g_continuous = g.is_certified();
    if !(g_continuous && singleton_continuous) {
        return Err(TopoError::precondition("pullback legs are not continuous"));
    }
    let pb = pullback(&g, &singleton)?;
    let carrier: Vec<(usize, usize)> = pb
        .carrier
        .iter()
        .map(|&(x, i)| (x, sub.points[i]))
        .collect();
    let contains_diagonal = w.d.iter().all(|d| carrier.contains(&(d, d)));
    Ok(PullbackDiagonal {
        pullback: pb,
        carrier,
        contains_diagonal,
        singleton_mono,
        singleton_continuous,
        g_continuous,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedImageReport {
    pub domain: DStatus,
    pub codomain: DStatus,
    pub violation: bool,
}

/// Compares the D verdicts of the domain and codomain of a closed continuous surjection.
pub fn closed_image_transfer(t: &ContinuousMap, caps: &Caps) -> Result<ClosedImageReport> {
    if !t.is_certified() {
        return Err(TopoError::precondition("map is not continuous"));
    }
    if !t.is_surjective() {
        return Err(TopoError::precondition("map is not surjective"));
    }
    if !t.is_closed_map() {
        return Err(TopoError::precondition("map is not closed"));
    }
    let domain = dspace_check(t.domain(), caps.assignments, 0).status;
    let codomain = dspace_check(t.codomain(), caps.assignments, 0).status;
    Ok(ClosedImageReport {
        domain,
        codomain,
        violation: domain == DStatus::Yes && codomain == DStatus::No,
    })
}

/// Every finite space is fair: a nested finite family of closed discrete sets has its largest member as union.
pub fn is_fair(_space: &FiniteSpace) -> (bool, &'static str) {
    (
        true,
        "a finite nested family's union is its largest member, which is already closed",
    )
}

#[derive(Debug, Clone)]
pub struct ShrinkMorphism {
    /// `R` as a code table on `P(X)`, when `R(f(x)) = f*(x)` is well defined.
    pub map: Option<ContinuousMap>,
    pub report: Option<CosliceReport>,
    /// Points `x, y` with `f(x) = f(y)` but `f*(x) ≠ f*(y)`.
    pub conflict: Option<(usize, usize)>,
}

/// Builds `R` with `R(f(x)) = f*(x)` on the image of `f` and `R(B) = B` elsewhere,
/// then checks the coslice triangle `R ∘ f = f*`.
pub fn refinement_shrink_morphism(
    f: &CompanionMap,
    f_star: &CompanionMap,
    caps: &Caps,
) -> Result<ShrinkMorphism> {
    if f.space() != f_star.space() || f.domain_size() != f_star.domain_size() {
        return Err(TopoError::input("companion maps of different shapes"));
    }
    let fm = f.to_map(caps)?;
    let hm = f_star.to_map(caps)?;
    let points = fm.codomain().n();
    let mut table: Vec<Option<usize>> = vec![None; points];
    for x in 0..fm.domain().n() {
        let (a, b) = (fm.apply(x), hm.apply(x));
        match table[a] {
            Some(prev) if prev != b => {
                let y = (0..x)
                    .find(|&y| fm.apply(y) == a)
                    .expect("earlier point with the same value");
                return Ok(ShrinkMorphism {
                    map: None,
                    report: None,
                    conflict: Some((y, x)),
                });
            }
            _ => table[a] = Some(b),
        }
    }
    let values = table
        .iter()
        .enumerate()
        .map(|(b, v)| v.unwrap_or(b))
        .collect();
    let r = ContinuousMap::new(fm.codomain().clone(), fm.codomain().clone(), values)?;
    let report = coslice_commute(&fm, &hm, &r)?;
    Ok(ShrinkMorphism {
        map: Some(r),
        report: Some(report),
        conflict: None,
    })
}

/// Checks the trace `S(A) = A ∩ D` as a coslice morphism from `f` to `g = f ∩ D`.
pub fn trace_morphism(f: &CompanionMap, d: PointSet, caps: &Caps) -> Result<CosliceReport> {
    if f.domain_size() == 0 {
        return Err(TopoError::input(
            "trace of a companion over an empty index set",
        ));
    }
    let fm = f.to_map(caps)?;
    let s = trace_map(f.domain_size(), d, caps)?;
    let target = puf_target(d.len(), caps)?;
    let g = ContinuousMap::new(
        f.space().clone(),
        target,
        f.values()
            .iter()
            .map(|v| compress(v.intersection(d).bits(), d) as usize)
            .collect(),
    )?;
    coslice_commute(&fm, &g, &s.map)
}

/// The refinement `N**(d) = N*(d) \ (g(d) \ {d})` for `g(x) = f*(x) ∩ D`, with whether
/// `D` is then a kernel on which the new trace is `{d}`.
pub fn double_puncture(n_star: &SetAssignment, d: PointSet) -> Result<(SetAssignment, bool)> {
    n_star.require_neighborhood()?;
    let f = companion_map(n_star);
    let space = n_star.space();
    let sets: Vec<PointSet> = (0..space.n())
        .map(|x| {
            if d.contains(x) {
                n_star
                    .set(x)
                    .difference(f.value(x).intersection(d).without(x))
            } else {
                n_star.set(x)
            }
        })
        .collect();
    if let Some((x, s)) = sets.iter().enumerate().find(|(_, s)| !space.is_open(**s)) {
        return Err(TopoError::precondition(format!(
            "refined set {s} of point {x} is not open"
        )));
    }
    let n2 = SetAssignment::neighborhood(space, sets)?;
    let g2 = companion_map(&n2);
    let ok = n2.union_over(d).is_full()
        && d.iter()
            .all(|x| g2.value(x).intersection(d) == PointSet::singleton(space.n(), x));
    Ok((n2, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(u: usize, pts: &[usize]) -> PointSet {
        PointSet::from_points(u, pts.iter().copied()).unwrap()
    }

    fn sierpinski_n() -> SetAssignment {
        SetAssignment::neighborhood(
            &FiniteSpace::sierpinski(),
            vec![set(2, &[0]), set(2, &[0, 1])],
        )
        .unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn assignment_counts() {
        assert_eq!(neighborhood_assignment_count(&FiniteSpace::sierpinski()), 2);
        assert_eq!(
            neighborhood_assignment_count(&FiniteSpace::indiscrete(2)),
            1
        );
        assert_eq!(neighborhood_assignment_count(&FiniteSpace::discrete(2)), 4);
    }

    #[test]
    fn kernel_search_examples() {
        assert_eq!(kernel_search(&sierpinski_n()).unwrap(), Some(set(2, &[1])));
        assert_eq!(
            kernel_search(&SetAssignment::total(&FiniteSpace::indiscrete(2))).unwrap(),
            None
        );
        assert_eq!(
            kernel_search(&SetAssignment::total(&FiniteSpace::discrete(3))).unwrap(),
            Some(set(3, &[0]))
        );
    }

    #[test]
    fn dspace_examples() {
        let v = dspace_check(&FiniteSpace::sierpinski(), 1 << 20, 0);
        assert_eq!(v.status, DStatus::Yes);
        assert_eq!(v.witnesses, vec![set(2, &[1]), set(2, &[1])]);
        assert_eq!((v.assignments_checked, v.assignments_total), (2, 2));

        let v = dspace_check(&FiniteSpace::indiscrete(2), 1 << 20, 0);
        assert_eq!(v.status, DStatus::No);
        assert_eq!(v.counterexample, Some(vec![set(2, &[0, 1]); 2]));

        for k in 0..=4 {
            assert_eq!(
                dspace_check(&FiniteSpace::discrete(k), 1 << 20, 0).status,
                DStatus::Yes
            );
        }
        let v = dspace_check(&FiniteSpace::discrete(4), 10, 3);
        assert_eq!(
            (v.status, v.assignments_checked),
            (DStatus::UnknownSampled, 10)
        );
        assert_eq!(
            dspace_check(&FiniteSpace::indiscrete(3), 0, 3).status,
            DStatus::UnknownSampled
        );
    }

    #[test]
    fn greedy_examples() {
        let d3 = FiniteSpace::discrete(3);
        let out = greedy_kernel(&SetAssignment::total(&d3), &[0, 1, 2]).unwrap();
        assert!(out.success());
        assert_eq!(out.kernel, set(3, &[0]));

        let out = greedy_kernel(&sierpinski_n(), &[0, 1]).unwrap();
        assert!(!out.success());
        assert_eq!(out.kernel, set(2, &[0, 1]));
        assert!(out.closed && !out.discrete && out.covers);
        assert_eq!(
            out.failure_reason().unwrap(),
            "{0,1} is not discrete; a refined set is not open"
        );

        let out = greedy_kernel(&sierpinski_n(), &[1, 0]).unwrap();
        assert!(out.success());
        assert_eq!(out.kernel, set(2, &[1]));

        assert!(greedy_kernel(&sierpinski_n(), &[0, 0]).is_err());
    }

    #[test]
    fn greedy_trace_is_stable() {
        let text = greedy_kernel(&sierpinski_n(), &[0, 1]).unwrap().to_string();
        let expected = "greedy order [0, 1]\n\
step 1: pick 0, N(0) \\ {} = {0} -> {0}, covered {0}\n\
step 2: pick 1, N(1) \\ {0} = {0,1} -> {1}, covered {0,1}\n\
kernel {0,1}: closed=true discrete=false covers=true refinement_open=false\n\
failure: {0,1} is not discrete; a refined set is not open";
        assert_eq!(text, expected);
    }

    #[test]
    fn all_orders_examples() {
        let r = greedy_kernel_all_orders(&sierpinski_n(), &caps()).unwrap();
        assert_eq!(r.first_success.unwrap().order, vec![1, 0]);
        assert!(r.finding.is_none());

        let r =
            greedy_kernel_all_orders(&SetAssignment::total(&FiniteSpace::indiscrete(2)), &caps())
                .unwrap();
        assert!(r.first_success.is_none() && r.finding.is_none());

        let d2 = FiniteSpace::discrete(2);
        let r = greedy_kernel_all_orders(&SetAssignment::minimal(&d2), &caps()).unwrap();
        assert!(r.all_succeed());
        assert_eq!(r.first_success.unwrap().kernel, d2.full());
    }

    #[test]
    fn forced_examples() {
        let f = forced_points(&sierpinski_n()).unwrap();
        assert_eq!(f.points, set(2, &[1]));
        assert!(f.in_every_kernel && f.in_every_refinement_kernel);

        let d3 = FiniteSpace::discrete(3);
        assert_eq!(
            forced_points(&SetAssignment::minimal(&d3)).unwrap().points,
            d3.full()
        );
        assert!(forced_points(&SetAssignment::total(&d3))
            .unwrap()
            .points
            .is_empty());
    }

    #[test]
    fn criterion_examples() {
        let d3 = FiniteSpace::discrete(3);
        let r = closed_discrete_criterion(&SetAssignment::minimal(&d3), d3.full()).unwrap();
        assert!(r.applicable && r.closed && r.discrete);

        let d2 = FiniteSpace::discrete(2);
        let n = SetAssignment::neighborhood(&d2, vec![d2.full(), set(2, &[1])]).unwrap();
        let r = closed_discrete_criterion(&n, d2.full()).unwrap();
        assert!(!r.separated && !r.applicable);

        // Both conditions hold off T1, yet D is not closed.
        let ind = FiniteSpace::indiscrete(2);
        let r = closed_discrete_criterion(&SetAssignment::total(&ind), set(2, &[0])).unwrap();
        assert!(r.kernel && r.separated && !r.t1 && !r.applicable);
        assert!(!r.closed);
    }

    #[test]
    fn characterization_examples() {
        let w = characterization_witness(&sierpinski_n()).unwrap().unwrap();
        assert_eq!(w.g, vec![set(2, &[1]), set(2, &[1])]);
        assert!(w.holds());

        let d3 = FiniteSpace::discrete(3);
        let w = characterization_witness(&SetAssignment::total(&d3))
            .unwrap()
            .unwrap();
        assert_eq!(w.d, set(3, &[0]));
        assert!(w.g.iter().all(|v| *v == set(3, &[0])));

        assert!(
            characterization_witness(&SetAssignment::total(&FiniteSpace::indiscrete(2)))
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn pullback_diagonal_examples() {
        let w = characterization_witness(&sierpinski_n()).unwrap().unwrap();
        let p = pullback_diagonal_check(&w, &caps()).unwrap();
        assert_eq!(p.carrier, vec![(0, 1), (1, 1)]);
        assert!(p.holds());
        assert!(p.pullback.ump_certificate().holds());

        let w = characterization_witness(&SetAssignment::total(&FiniteSpace::discrete(1)))
            .unwrap()
            .unwrap();
        let p = pullback_diagonal_check(&w, &caps()).unwrap();
        assert_eq!(p.carrier, vec![(0, 0)]);

        let d2 = FiniteSpace::discrete(2);
        let w = characterization_witness(&SetAssignment::minimal(&d2))
            .unwrap()
            .unwrap();
        let p = pullback_diagonal_check(&w, &caps()).unwrap();
        assert_eq!(p.carrier, vec![(0, 0), (1, 1)]);
        assert!(p.holds());
    }

    #[test]
    fn closed_image_examples() {
        let s = FiniteSpace::sierpinski();
        let r = closed_image_transfer(&ContinuousMap::identity(&s), &caps()).unwrap();
        assert_eq!(
            (r.domain, r.codomain, r.violation),
            (DStatus::Yes, DStatus::Yes, false)
        );

        let k =
            ContinuousMap::constant(&FiniteSpace::discrete(2), &FiniteSpace::point(), 0).unwrap();
        assert!(!closed_image_transfer(&k, &caps()).unwrap().violation);

        let q = ContinuousMap::constant(&s, &FiniteSpace::point(), 0).unwrap();
        let r = closed_image_transfer(&q, &caps()).unwrap();
        assert_eq!((r.domain, r.codomain), (DStatus::Yes, DStatus::Yes));

        let incl = ContinuousMap::new(FiniteSpace::point(), s, vec![1]).unwrap();
        assert!(closed_image_transfer(&incl, &caps()).is_err());
    }

    #[test]
    fn coslice_morphisms_from_the_punctured_refinement() {
        let n = sierpinski_n();
        let w = characterization_witness(&n).unwrap().unwrap();
        let f = companion_map(&n);
        let r = refinement_shrink_morphism(&f, &w.f_star, &caps()).unwrap();
        let rep = r.report.unwrap();
        assert!(rep.commutes && rep.all_continuous);

        let t = trace_morphism(&w.f_star, w.d, &caps()).unwrap();
        assert!(t.commutes && t.all_continuous);
    }

    #[test]
    fn double_puncture_on_discrete() {
        let d3 = FiniteSpace::discrete(3);
        let (n2, ok) = double_puncture(&SetAssignment::total(&d3), d3.full()).unwrap();
        assert!(ok);
        assert_eq!(n2, SetAssignment::minimal(&d3));
    }
}
