//! Replays the invariants of every module over the labeled catalog and seeded
//! random assignments, tallying instances and violations per theorem.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assignment::{
    all_assignments, classify_assignment, companion_map, is_kernel, is_refinement,
    neighborhood_assignments, restrict_assignment, verify_companion_unique, SetAssignment,
};
use crate::caps::Caps;
use crate::catalog::{
    canonical_hash, canonicalize, enumerate_topologies, find_homeomorphism, fingerprint, Mode,
};
use crate::category::{continuous_maps, initial_terminal, is_epi, is_mono, probe_spaces};
use crate::covering::{
    companion_bound_identity, exclusiveness, metacompact_witness, order_as_relation,
    paracompact_witness, DStatus,
};
use crate::dspace::{
    characterization_witness, closed_discrete_criterion, closed_image_transfer, double_puncture,
    forced_points, greedy_kernel, greedy_kernel_all_orders, kernel_search, pullback_diagonal_check,
    refinement_shrink_morphism, trace_morphism,
};
use crate::error::{Result, TopoError};
use crate::puf::{build_puf_space, functor_check, image_map, trace_map, upset_oracle};
use crate::set::PointSet;
use crate::space::{closure, is_closed_discrete, separation_level, verify_axioms, FiniteSpace};

/// Largest `max_n` the suite accepts.
pub const SUITE_MAX_POINTS: usize = 4;
/// Spaces up to this size are checked exhaustively; larger ones are budgeted.
pub const EXHAUSTIVE_POINTS: usize = 3;

const LABELED: [usize; 6] = [1, 1, 4, 29, 355, 6942];
const UNLABELED: [usize; 6] = [1, 1, 3, 9, 33, 139];

pub const THEOREMS: &[(&str, &str)] = &[
    (
        "space.axioms",
        "enumerated spaces satisfy the topology axioms and closures are closed",
    ),
    (
        "catalog.counts",
        "labeled and unlabeled enumeration counts match the reference table",
    ),
    (
        "catalog.canonical",
        "equal canonical hashes exactly when a homeomorphism exists",
    ),
    ("puf.opens", "power-set topology equals the up-set oracle"),
    (
        "puf.trace",
        "trace maps are continuous with the principal preimages",
    ),
    (
        "puf.image",
        "image maps are continuous with fiber-union preimages",
    ),
    (
        "puf.functor",
        "image maps preserve identities and composition",
    ),
    (
        "companion.preimage",
        "companion preimages of principal ultrafilters give back the assigned sets",
    ),
    (
        "companion.continuity",
        "companion maps are continuous into the power-set space",
    ),
    (
        "companion.unique",
        "the companion is the only map with those preimages",
    ),
    (
        "assignment.classification",
        "covering and neighborhood tests agree with their companion forms",
    ),
    (
        "restriction.trace",
        "restriction companions equal traces, covering iff traces never empty",
    ),
    (
        "refinement.routes",
        "refinement by sets agrees with refinement by companions",
    ),
    (
        "covering.bound",
        "companion union over a neighborhood counts the members it meets",
    ),
    (
        "covering.paracompact",
        "paracompact witnesses certify on every covering assignment",
    ),
    (
        "covering.metacompact",
        "metacompact witnesses certify on every covering assignment",
    ),
    (
        "invariant.extent",
        "extent never exceeds the Lindelöf degree",
    ),
    (
        "invariant.d_extent",
        "D-spaces have extent equal to the Lindelöf degree",
    ),
    (
        "exclusive.routes",
        "definitional and closed-subset exclusiveness agree",
    ),
    (
        "exclusive.t1",
        "exclusiveness at least 1 exactly for T1 spaces",
    ),
    (
        "exclusive.d",
        "κ-exclusive spaces with Lindelöf degree at most κ are D",
    ),
    (
        "chain.left_gls",
        "left-separated spaces are GLS, via the order relation",
    ),
    ("chain.gls_d", "GLS spaces are D"),
    ("ad.from_d", "D-spaces are aD"),
    ("ad.strict", "some space is aD but not D"),
    ("dspace.discrete", "discrete spaces are D"),
    ("dspace.fair", "T1 spaces are D"),
    (
        "dspace.extension",
        "in T1 spaces adding a point keeps a set closed discrete",
    ),
    (
        "dspace.hereditary",
        "subsets of closed discrete sets are closed discrete",
    ),
    (
        "dspace.verdict",
        "the D verdict holds exactly when every assignment has a characterization witness",
    ),
    (
        "dspace.refinement",
        "a refinement has a closed discrete kernel exactly when the assignment has one",
    ),
    (
        "dspace.puncture",
        "the punctured refinement keeps the kernel and isolates it",
    ),
    (
        "dspace.forced",
        "forced points lie in every kernel, also for refinements",
    ),
    (
        "dspace.criterion",
        "T1 with separated kernel gives a closed discrete set",
    ),
    (
        "dspace.characterization",
        "the trace companion never takes the empty set and is a singleton on the kernel",
    ),
    (
        "dspace.pullback",
        "the singleton map is a continuous mono and the pullback contains the diagonal",
    ),
    (
        "dspace.double_puncture",
        "the double puncture keeps a kernel with singleton traces",
    ),
    (
        "dspace.greedy",
        "every greedy order succeeds on T1 spaces and validates independently",
    ),
    (
        "dspace.greedy_trace",
        "the Sierpiński identity-order trace is stable",
    ),
    (
        "dspace.closed_image",
        "closed continuous images of D-spaces are D",
    ),
    (
        "coslice.shrink",
        "the shrink morphism commutes whenever it is well defined",
    ),
    (
        "coslice.trace",
        "the trace is a continuous coslice morphism onto the kernel companion",
    ),
    (
        "category.ump",
        "product, equalizer and pullback certificates have unique mediating maps",
    ),
    (
        "category.mono_epi",
        "categorical and concrete mono and epi agree",
    ),
    (
        "category.terminal",
        "the empty space is initial and the point terminal",
    ),
];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub max_n: usize,
    pub seed: u64,
    /// Random assignments per space above the exhaustive size.
    pub samples: usize,
    pub caps: Caps,
    /// Extra spaces run through the space-level checks; a test hook for malformed input.
    pub inject: Vec<FiniteSpace>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_n: 3,
            seed: 0,
            samples: 32,
            caps: Caps::default(),
            inject: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremResult {
    pub id: &'static str,
    pub statement: &'static str,
    pub instances: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
    pub notes: Vec<String>,
}

impl TheoremResult {
    pub fn vacuous(&self) -> bool {
        self.instances == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub max_n: usize,
    pub seed: u64,
    pub samples: usize,
    pub theorems: Vec<TheoremResult>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn violations(&self) -> u64 {
        self.theorems.iter().map(|t| t.violations).sum()
    }

    pub fn failing(&self) -> impl Iterator<Item = &TheoremResult> {
        self.theorems.iter().filter(|t| t.violations > 0)
    }

    pub fn theorem(&self, id: &str) -> Option<&TheoremResult> {
        self.theorems.iter().find(|t| t.id == id)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.violations() > 0)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite max_n={} seed={} samples={}",
            self.max_n, self.seed, self.samples
        )?;
        writeln!(
            f,
            "{:<26} {:>10} {:>10}  status",
            "theorem", "instances", "violations"
        )?;
        for t in &self.theorems {
            let status = match (t.violations, t.instances) {
                (0, 0) => "vacuous",
                (0, _) => "ok",
                _ => "FAIL",
            };
            writeln!(
                f,
                "{:<26} {:>10} {:>10}  {status}",
                t.id, t.instances, t.violations
            )?;
            if let Some(v) = &t.first_violation {
                writeln!(f, "    first violation: {v}")?;
            }
            for note in &t.notes {
                writeln!(f, "    note: {note}")?;
            }
        }
        write!(
            f,
            "total violations: {} in {} ms",
            self.violations(),
            self.elapsed_ms
        )
    }
}

struct Tally {
    results: Vec<TheoremResult>,
    findings: BTreeMap<(&'static str, &'static str), (u64, String)>,
}

impl Tally {
    fn new() -> Self {
        let results = THEOREMS
            .iter()
            .map(|&(id, statement)| TheoremResult {
                id,
                statement,
                instances: 0,
                violations: 0,
                first_violation: None,
                notes: Vec::new(),
            })
            .collect();
        Tally { results, findings: BTreeMap::new() }
    }

    fn entry(&mut self, id: &str) -> &mut TheoremResult {
        self.results
            .iter_mut()
            .find(|t| t.id == id)
            .unwrap_or_else(|| panic!("unknown theorem id {id}"))
    }

    fn check(&mut self, id: &str, ok: bool, detail: impl FnOnce() -> String) {
        let t = self.entry(id);
        t.instances += 1;
        if !ok {
            t.violations += 1;
            if t.first_violation.is_none() {
                t.first_violation = Some(detail());
            }
        }
    }

    fn fail(&mut self, id: &str, err: TopoError) {
        self.check(id, false, || err.to_string());
    }

    fn note(&mut self, id: &str, note: String) {
        self.entry(id).notes.push(note);
    }

    /// Counts a side observation that is not a violation, keeping the first example.
    fn finding(&mut self, id: &'static str, what: &'static str, example: impl FnOnce() -> String) {
        self.findings.entry((id, what)).or_insert_with(|| (0, example())).0 += 1;
    }

    fn flush_findings(&mut self) {
        for ((id, what), (count, example)) in std::mem::take(&mut self.findings) {
            self.note(id, format!("{what}: {count} instances, first {example}"));
        }
    }
}

fn describe(space: &FiniteSpace) -> String {
    format!("{space:?}")
}

fn sets_of(a: &SetAssignment) -> String {
    a.sets()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs every theorem. Spaces with at most [`EXHAUSTIVE_POINTS`] points get every
/// assignment; larger spaces get `samples` seeded draws per space.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    if config.max_n > SUITE_MAX_POINTS {
        return Err(TopoError::Resource {
            what: "suite points",
            requested: config.max_n,
            cap: SUITE_MAX_POINTS,
        });
    }
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let caps = config.caps;

    let mut by_n: Vec<Vec<FiniteSpace>> = Vec::new();
    for n in 0..=config.max_n {
        let labeled = enumerate_topologies(n, Mode::Labeled)?;
        let unlabeled = enumerate_topologies(n, Mode::UpToHomeomorphism)?;
        t.check(
            "catalog.counts",
            labeled.len() == LABELED[n] && unlabeled.len() == UNLABELED[n],
            || {
                format!(
                    "n={n}: {} labeled, {} unlabeled",
                    labeled.len(),
                    unlabeled.len()
                )
            },
        );
        canonical_checks(&mut t, n, &labeled, &unlabeled)?;
        by_n.push(labeled);
    }

    for space in &config.inject {
        if space_axioms(&mut t, space) {
            space_level(&mut t, space, &caps)?;
        }
    }
    let mut verdicts: Vec<(FiniteSpace, DStatus)> = Vec::new();
    let mut ad_not_d = 0;
    for (n, spaces) in by_n.iter().enumerate().skip(1) {
        for space in spaces {
            if !space_axioms(&mut t, space) {
                continue;
            }
            let (status, ad) = space_level(&mut t, space, &caps)?;
            if ad && status == DStatus::No {
                ad_not_d += 1;
            }
            let exhaustive = n <= EXHAUSTIVE_POINTS;
            companion_level(&mut t, space, &caps, exhaustive, config.samples, &mut rng);
            neighborhood_level(
                &mut t,
                space,
                status,
                &caps,
                exhaustive,
                config.samples,
                &mut rng,
            )?;
            if exhaustive {
                verdicts.push((space.clone(), status));
            }
        }
    }
    if config.max_n >= 2 {
        t.check("ad.strict", ad_not_d > 0, || {
            "no space is aD without being D".into()
        });
        t.note(
            "ad.strict",
            format!("{ad_not_d} labeled spaces are aD but not D"),
        );
    }
    map_level(&mut t, &verdicts, &caps)?;
    puf_level(&mut t, &caps)?;
    greedy_trace(&mut t)?;
    vacuity_notes(&mut t);

    Ok(SuiteReport {
        max_n: config.max_n,
        seed: config.seed,
        samples: config.samples,
        theorems: t.results,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn canonical_checks(
    t: &mut Tally,
    n: usize,
    labeled: &[FiniteSpace],
    unlabeled: &[FiniteSpace],
) -> Result<()> {
    if n <= EXHAUSTIVE_POINTS {
        let hashes: Vec<String> = labeled.iter().map(canonical_hash).collect::<Result<_>>()?;
        for (i, a) in labeled.iter().enumerate() {
            for (j, b) in labeled.iter().enumerate() {
                let same = hashes[i] == hashes[j];
                t.check(
                    "catalog.canonical",
                    same == find_homeomorphism(a, b).is_some(),
                    || format!("{} vs {}", describe(a), describe(b)),
                );
            }
        }
    } else {
        for a in labeled {
            let c = canonicalize(a)?;
            let ok =
                canonical_hash(&c)? == canonical_hash(a)? && find_homeomorphism(a, &c).is_some();
            t.check("catalog.canonical", ok, || describe(a));
        }
        for (i, a) in unlabeled.iter().enumerate() {
            for b in &unlabeled[i + 1..] {
                t.check(
                    "catalog.canonical",
                    find_homeomorphism(a, b).is_none(),
                    || {
                        format!(
                            "representatives {} and {} are homeomorphic",
                            describe(a),
                            describe(b)
                        )
                    },
                );
            }
        }
    }
    Ok(())
}

fn space_axioms(t: &mut Tally, space: &FiniteSpace) -> bool {
    let report = verify_axioms(space);
    let closures_closed = report.holds()
        && space.full().subsets().all(|s| {
            closure(space, s)
                .map(|c| space.is_closed(c) && s.is_subset(c))
                .unwrap_or(false)
        });
    let ok = report.holds() && closures_closed;
    t.check("space.axioms", ok, || {
        format!("{}: {}", describe(space), report.failures().join("; "))
    });
    ok
}

/// Space-wide invariants; returns the D verdict and the aD flag.
fn space_level(t: &mut Tally, space: &FiniteSpace, caps: &Caps) -> Result<(DStatus, bool)> {
    let rec = fingerprint(space, caps, caps.assignments, 0)?;
    let fp = &rec.fingerprint;
    let d = fp.is_d;
    t.check("invariant.extent", fp.extent <= fp.lindelof_degree, || {
        describe(space)
    });
    if d == DStatus::Yes {
        t.check(
            "invariant.d_extent",
            fp.extent == fp.lindelof_degree,
            || describe(space),
        );
    }
    let ex = exclusiveness(space);
    t.check("exclusive.routes", ex.agree(), || {
        format!("{}: {ex:?}", describe(space))
    });
    t.check("exclusive.t1", (ex.kappa() >= 1) == fp.t1, || {
        describe(space)
    });
    if ex.kappa() >= 1 && fp.lindelof_degree <= ex.kappa() {
        t.check("exclusive.d", d == DStatus::Yes, || describe(space));
    }
    if let Some(order) = &rec.witnesses.left_separated_order {
        let rel = order_as_relation(space.n(), order);
        t.check(
            "chain.left_gls",
            rel.validates(space) && fp.gls == Some(true),
            || describe(space),
        );
    }
    if let Some(gls) = &rec.witnesses.gls {
        t.check(
            "chain.gls_d",
            gls.validates(space) && d == DStatus::Yes,
            || describe(space),
        );
    }
    if d == DStatus::Yes {
        t.check("ad.from_d", fp.is_ad, || describe(space));
    }
    if space.open_count() == 1 << space.n() {
        t.check("dspace.discrete", d == DStatus::Yes, || describe(space));
    }
    let closed_discrete: Vec<PointSet> = space
        .closed_sets()
        .filter(|&c| is_closed_discrete(space, c))
        .collect();
    if fp.t1 {
        t.check("dspace.fair", d == DStatus::Yes, || describe(space));
        for &f in &closed_discrete {
            for x in f.complement().iter() {
                t.check(
                    "dspace.extension",
                    is_closed_discrete(space, f.with(x)),
                    || format!("{}: {f} + {x}", describe(space)),
                );
            }
        }
    }
    for &f in &closed_discrete {
        let ok = f.subsets().all(|s| is_closed_discrete(space, s));
        t.check("dspace.hereditary", ok, || {
            format!("{}: {f}", describe(space))
        });
    }
    t.check(
        "category.terminal",
        initial_terminal(space).certified(),
        || describe(space),
    );
    Ok((d, fp.is_ad))
}

fn companion_checks(t: &mut Tally, a: &SetAssignment, caps: &Caps, seed: u64) {
    let f = companion_map(a);
    t.check("companion.preimage", f.preimage_identity(), || sets_of(a));
    t.check("companion.continuity", f.continuous(), || sets_of(a));
    let u = verify_companion_unique(a, caps.exhaustive, seed);
    t.check("companion.unique", u.holds(), || {
        format!("{}: {u:?}", sets_of(a))
    });
    let c = classify_assignment(a);
    t.check("assignment.classification", c.routes_agree(), || {
        format!("{}: {c:?}", sets_of(a))
    });
    for d in a.domain().subsets() {
        match restrict_assignment(a, d) {
            Ok(r) => t.check(
                "restriction.trace",
                r.trace_agrees && r.covering == r.covering_via_trace,
                || format!("{} restricted to {d}", sets_of(a)),
            ),
            Err(e) => t.fail("restriction.trace", e),
        }
    }
    if a.is_covering() {
        let minimal = SetAssignment::minimal(a.space());
        let total = SetAssignment::total(a.space());
        for n in [&minimal, &total] {
            match companion_bound_identity(a, n) {
                Ok(ok) => t.check("covering.bound", ok, || sets_of(a)),
                Err(e) => t.fail("covering.bound", e),
            }
        }
        match paracompact_witness(a) {
            Ok(w) => t.check("covering.paracompact", w.certified, || sets_of(a)),
            Err(e) => t.fail("covering.paracompact", e),
        }
        match metacompact_witness(a) {
            Ok(w) => t.check("covering.metacompact", w.certified, || sets_of(a)),
            Err(e) => t.fail("covering.metacompact", e),
        }
    }
}

fn refinement_check(t: &mut Tally, a: &SetAssignment, b: &SetAssignment) {
    match is_refinement(a, b) {
        Ok(r) => t.check("refinement.routes", r.routes_agree(), || {
            format!("{} against {}", sets_of(a), sets_of(b))
        }),
        Err(e) => t.fail("refinement.routes", e),
    }
}

/// Assignments of `m ≤ 3` opens: all of them when exhaustive, else seeded samples.
fn companion_level(
    t: &mut Tally,
    space: &FiniteSpace,
    caps: &Caps,
    exhaustive: bool,
    samples: usize,
    rng: &mut ChaCha8Rng,
) {
    for m in 0..=3 {
        if exhaustive {
            let all: Vec<SetAssignment> = all_assignments(space, m).collect();
            for a in &all {
                companion_checks(t, a, caps, 0);
                for b in &all {
                    refinement_check(t, a, b);
                }
            }
        } else {
            let opens = space.opens();
            let draw = |rng: &mut ChaCha8Rng| {
                let sets = (0..m)
                    .map(|_| *opens.choose(rng).expect("opens contain X"))
                    .collect();
                SetAssignment::new(space, sets).expect("sampled opens")
            };
            for _ in 0..samples {
                let a = draw(rng);
                let b = draw(rng);
                companion_checks(t, &a, caps, rng.gen());
                refinement_check(t, &a, &b);
                refinement_check(t, &a, &a);
            }
        }
    }
}

fn random_neighborhood(space: &FiniteSpace, rng: &mut ChaCha8Rng) -> SetAssignment {
    let sets = (0..space.n())
        .map(|x| {
            let opts: Vec<PointSet> = space.opens_containing(x).collect();
            *opts.choose(rng).expect("X contains x")
        })
        .collect();
    SetAssignment::neighborhood(space, sets).expect("sampled neighborhoods")
}

fn neighborhood_level(
    t: &mut Tally,
    space: &FiniteSpace,
    status: DStatus,
    caps: &Caps,
    exhaustive: bool,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let ns: Vec<SetAssignment> = if exhaustive {
        neighborhood_assignments(space).collect()
    } else {
        (0..samples)
            .map(|_| random_neighborhood(space, rng))
            .collect()
    };
    let mut all_witnessed = true;
    let mut certified: HashSet<(Vec<PointSet>, PointSet)> = HashSet::new();
    for n in &ns {
        let kernel = kernel_search(n)?;
        let witness = characterization_witness(n)?;
        all_witnessed &= witness.is_some();
        t.check(
            "dspace.verdict",
            kernel.is_some() == witness.is_some(),
            || sets_of(n),
        );

        let refined_kernel = refinements(n).any(|r| kernel_search(&r).ok().flatten().is_some());
        t.check(
            "dspace.refinement",
            refined_kernel == kernel.is_some(),
            || sets_of(n),
        );

        let forced = forced_points(n)?;
        t.check(
            "dspace.forced",
            forced.in_every_kernel && forced.in_every_refinement_kernel,
            || sets_of(n),
        );

        for d in space.full().subsets() {
            let c = closed_discrete_criterion(n, d)?;
            t.check("dspace.criterion", c.consistent(), || {
                format!("{} with {d}", sets_of(n))
            });
        }

        if let Some(w) = witness {
            let d = w.d;
            let n_star = &w.n_star;
            let r = is_refinement(n_star, n)?;
            let isolated = d
                .iter()
                .all(|x| n_star.set(x).intersection(d) == PointSet::singleton(space.n(), x));
            t.check(
                "dspace.puncture",
                r.direct && r.neighborhood && is_kernel(n_star, d)? && isolated,
                || sets_of(n),
            );
            t.check("dspace.characterization", w.holds(), || sets_of(n));
            match pullback_diagonal_check(&w, caps) {
                Ok(p) => {
                    t.check("dspace.pullback", p.holds(), || sets_of(n));
                    if certified.insert((w.g.clone(), d)) {
                        let ok = p.pullback.ump_certificate().holds()
                            && p.pullback.product.ump_certificate().holds()
                            && p.pullback.equalizer.ump_certificate().holds()
                            && p.pullback.commutes();
                        t.check("category.ump", ok, || {
                            format!("pullback for {}", sets_of(n))
                        });
                    }
                }
                Err(e) => t.fail("dspace.pullback", e),
            }
            match double_puncture(n_star, d) {
                Ok((_, ok)) => t.check("dspace.double_puncture", ok, || sets_of(n)),
                Err(e) => t.fail("dspace.double_puncture", e),
            }
            let f = companion_map(n);
            match refinement_shrink_morphism(&f, &w.f_star, caps) {
                Ok(s) => match s.report {
                    Some(rep) => {
                        t.check("coslice.shrink", rep.commutes, || sets_of(n));
                        if !rep.all_continuous {
                            t.finding("coslice.shrink", "R discontinuous", || sets_of(n));
                        }
                    }
                    None => t.finding("coslice.shrink", "R not well defined", || {
                        let (x, y) = s.conflict.expect("conflict recorded");
                        format!("{} at points {x} and {y}", sets_of(n))
                    }),
                },
                Err(e) => t.fail("coslice.shrink", e),
            }
            if space.n() > 0 {
                match trace_morphism(&w.f_star, d, caps) {
                    Ok(rep) => t.check("coslice.trace", rep.commutes && rep.all_continuous, || {
                        sets_of(n)
                    }),
                    Err(e) => t.fail("coslice.trace", e),
                }
            }
        }
    }
    if exhaustive && status != DStatus::UnknownSampled {
        t.check(
            "dspace.verdict",
            (status == DStatus::Yes) == all_witnessed,
            || describe(space),
        );
    }
    if separation_level(space).t1 && space.n() <= caps.order_search {
        let all: Vec<SetAssignment> = neighborhood_assignments(space).collect();
        for n in &all {
            let out = greedy_kernel_all_orders(n, caps)?;
            let validated = out.first_success.as_ref().is_some_and(|g| {
                let r = SetAssignment::neighborhood(space, g.refinement.clone());
                is_closed_discrete(space, g.kernel)
                    && r.is_ok_and(|r| {
                        r.union_over(g.kernel).is_full()
                            && is_refinement(&r, n).is_ok_and(|c| c.direct)
                    })
            });
            t.check("dspace.greedy", out.all_succeed() && validated, || {
                sets_of(n)
            });
        }
    }
    Ok(())
}

fn refinements(n: &SetAssignment) -> impl Iterator<Item = SetAssignment> + '_ {
    use itertools::Itertools;
    let space = n.space();
    (0..space.n())
        .map(|x| {
            space
                .opens_containing(x)
                .filter(|o| o.is_subset(n.set(x)))
                .collect::<Vec<_>>()
        })
        .multi_cartesian_product()
        .map(|sets| SetAssignment::neighborhood(space, sets).expect("refined neighborhoods"))
        .chain((space.n() == 0).then(|| n.clone()))
}

/// Mono/epi routes and closed images over every continuous map between the exhaustive spaces.
fn map_level(t: &mut Tally, verdicts: &[(FiniteSpace, DStatus)], caps: &Caps) -> Result<()> {
    let mut closed_surjections = 0;
    for (a, da) in verdicts {
        for (b, db) in verdicts {
            for map in continuous_maps(a, b) {
                let mono = is_mono(&map)?;
                let epi = is_epi(&map)?;
                t.check("category.mono_epi", mono.agree() && epi.agree(), || {
                    format!("{:?} from {} to {}", map.values(), describe(a), describe(b))
                });
                if map.is_surjective() && map.is_closed_map() {
                    closed_surjections += 1;
                    let ok = !(*da == DStatus::Yes && *db == DStatus::No);
                    t.check("dspace.closed_image", ok, || {
                        format!("{:?} from {} to {}", map.values(), describe(a), describe(b))
                    });
                }
            }
        }
    }
    if let Some((s, _)) = verdicts
        .iter()
        .find(|(s, _)| s.n() == 2 && s.open_count() == 3)
    {
        let r = closed_image_transfer(&crate::category::ContinuousMap::identity(s), caps)?;
        t.check("dspace.closed_image", !r.violation, || {
            "identity on Sierpiński".into()
        });
    }
    t.note(
        "dspace.closed_image",
        format!("{closed_surjections} closed continuous surjections"),
    );
    Ok(())
}

fn puf_level(t: &mut Tally, caps: &Caps) -> Result<()> {
    for n in 1..=caps.puf_bits.min(4) {
        let built = build_puf_space(n, caps)?;
        let oracle = upset_oracle(n)?;
        t.check("puf.opens", built.space == oracle, || {
            format!(
                "n={n}: {} opens vs {}",
                built.space.open_count(),
                oracle.open_count()
            )
        });
    }
    for n in 1..=caps.puf_bits.min(3) {
        for d in PointSet::full(n).subsets() {
            let tm = trace_map(n, d, caps)?;
            t.check("puf.trace", tm.certified(), || format!("n={n} D={d}"));
        }
    }
    for src in 0..=2usize {
        for dst in 1..=2usize {
            let total = dst.pow(src as u32);
            for code in 0..total {
                let map: Vec<usize> = (0..src).map(|i| code / dst.pow(i as u32) % dst).collect();
                let im = image_map(&map, dst, caps)?;
                t.check("puf.image", im.certified(), || {
                    format!("{map:?} into {dst}")
                });
            }
        }
    }
    let probes = probe_spaces();
    for a in &probes {
        for b in &probes {
            for c in &probes {
                for t1 in continuous_maps(a, b) {
                    for t2 in continuous_maps(b, c) {
                        let r = functor_check(&t1, &t2, caps)?;
                        t.check("puf.functor", r.holds(), || {
                            format!("{:?} then {:?}", t1.values(), t2.values())
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn greedy_trace(t: &mut Tally) -> Result<()> {
    let s = FiniteSpace::sierpinski();
    let n = SetAssignment::neighborhood(&s, vec![PointSet::singleton(2, 0), s.full()])?;
    let first = greedy_kernel(&n, &[0, 1])?;
    let second = greedy_kernel(&n, &[0, 1])?;
    let stable = first.to_string() == second.to_string()
        && !first.success()
        && greedy_kernel(&n, &[1, 0])?.success();
    t.check("dspace.greedy_trace", stable, || first.to_string());
    Ok(())
}

fn vacuity_notes(t: &mut Tally) {
    t.note(
        "dspace.greedy",
        "finite T1 spaces are discrete, so only discrete spaces qualify".into(),
    );
    t.note("dspace.fair", "finite T1 spaces are discrete".into());
    t.note(
        "exclusive.d",
        "exclusiveness at least 1 forces T1, hence discreteness".into(),
    );
    t.note(
        "dspace.double_puncture",
        "after one puncture the kernel traces are already singletons".into(),
    );
    t.flush_findings();
}
