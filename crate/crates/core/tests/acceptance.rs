//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines always reach stdout; exits non-zero when any criterion fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use topoforge::assignment::{
    all_assignments, companion_map, is_refinement, neighborhood_assignments, restrict_assignment,
    verify_companion_unique, Regime, SetAssignment,
};
use topoforge::catalog::{enumerate_topologies, Mode};
use topoforge::category::{continuous_maps, is_epi, is_mono};
use topoforge::covering::{
    exclusiveness, extent, gls_search, is_ad, left_separated_search, lindelof_degree,
    order_as_relation, DStatus,
};
use topoforge::dspace::{
    characterization_witness, dspace_check, greedy_kernel, kernel_search, pullback_diagonal_check,
};
use topoforge::puf::{build_puf_space, functor_check, upset_oracle};
use topoforge::suite::{run_suite, SuiteConfig};
use topoforge::{Caps, FiniteSpace, PointSet};

const PUF_LIMIT: Duration = Duration::from_secs(5);
const COMPANION_LIMIT: Duration = Duration::from_secs(120);
const SUITE_LIMIT: Duration = Duration::from_secs(300);

const PUF_OPENS: [usize; 4] = [3, 6, 20, 168];
const LABELED: [usize; 4] = [1, 4, 29, 355];
const UNLABELED: [usize; 4] = [1, 3, 9, 33];

const SIERPINSKI_TRACE: &str = "greedy order [0, 1]
step 1: pick 0, N(0) \\ {} = {0} -> {0}, covered {0}
step 2: pick 1, N(1) \\ {0} = {0,1} -> {1}, covered {0,1}
kernel {0,1}: closed=true discrete=false covers=true refinement_open=false
failure: {0,1} is not discrete; a refined set is not open";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// Oracles below work on raw bit masks and never call into the library's predicates.

fn open_masks(space: &FiniteSpace) -> HashSet<u64> {
    space.opens().iter().map(|u| u.bits()).collect()
}

fn full_mask(n: usize) -> u64 {
    (1u64 << n) - 1
}

fn oracle_closed(opens: &HashSet<u64>, n: usize, s: u64) -> bool {
    opens.contains(&(full_mask(n) & !s))
}

fn oracle_discrete(opens: &HashSet<u64>, s: u64) -> bool {
    (0..64).filter(|x| s >> x & 1 == 1).all(|x| opens.iter().any(|&u| u & s == 1 << x))
}

fn oracle_kernel_exists(opens: &HashSet<u64>, n: usize, sets: &[u64]) -> bool {
    (0..1u64 << n).any(|d| {
        let cover = (0..n).filter(|x| d >> x & 1 == 1).fold(0, |acc, x| acc | sets[x]);
        cover == full_mask(n) && oracle_closed(opens, n, d) && oracle_discrete(opens, d)
    })
}

fn oracle_t1(opens: &HashSet<u64>, n: usize) -> bool {
    (0..n).all(|x| oracle_closed(opens, n, 1 << x))
}

fn oracle_extent(opens: &HashSet<u64>, n: usize) -> usize {
    (0..1u64 << n)
        .filter(|&s| oracle_closed(opens, n, s) && oracle_discrete(opens, s))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Largest irredundant open cover, by scanning every subfamily of opens.
fn oracle_lindelof(space: &FiniteSpace) -> usize {
    let opens: Vec<u64> = space.opens().iter().map(|u| u.bits()).filter(|&u| u != 0).collect();
    let full = full_mask(space.n());
    let mut best = 0;
    for pick in 0u64..1 << opens.len() {
        let members: Vec<u64> = (0..opens.len()).filter(|i| pick >> i & 1 == 1).map(|i| opens[i]).collect();
        if members.len() <= best || members.iter().fold(0, |a, &u| a | u) != full {
            continue;
        }
        let irredundant = (0..members.len()).all(|i| {
            let rest = members.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |a, (_, &u)| a | u);
            rest != full
        });
        if irredundant {
            best = members.len();
        }
    }
    if space.n() == 0 {
        0
    } else {
        best
    }
}

fn oracle_topologies(n: usize) -> Vec<Vec<u64>> {
    let full = full_mask(n);
    let inner: Vec<u64> = (1..full).collect();
    (0u64..1 << inner.len())
        .map(|pick| {
            let mut fam = vec![0, full];
            fam.extend((0..inner.len()).filter(|i| pick >> i & 1 == 1).map(|i| inner[i]));
            fam.sort();
            fam.dedup();
            fam
        })
        .filter(|fam| {
            let set: HashSet<u64> = fam.iter().copied().collect();
            fam.iter().all(|&a| fam.iter().all(|&b| set.contains(&(a | b)) && set.contains(&(a & b))))
        })
        .collect()
}

fn oracle_classes(n: usize, fams: &[Vec<u64>]) -> usize {
    let relabel = |fam: &[u64], p: &[usize]| -> Vec<u64> {
        let mut out: Vec<u64> = fam
            .iter()
            .map(|&s| (0..n).filter(|i| s >> i & 1 == 1).fold(0, |t, i| t | 1 << p[i]))
            .collect();
        out.sort();
        out
    };
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let forms: HashSet<Vec<u64>> =
        fams.iter().map(|f| perms.iter().map(|p| relabel(f, p)).min().expect("at least one permutation")).collect();
    forms.len()
}

fn oracle_upsets(n: usize) -> usize {
    let points = 1usize << n;
    (0u64..1 << points)
        .filter(|fam| {
            (0..points).all(|a| fam >> a & 1 == 0 || (0..points).all(|b| b & a != a || fam >> b & 1 == 1))
        })
        .count()
}

fn spaces_up_to(n: usize) -> Vec<FiniteSpace> {
    (1..=n).flat_map(|k| enumerate_topologies(k, Mode::Labeled).expect("within cap")).collect()
}

fn criterion_1() -> Outcome {
    let caps = Caps::default();
    let mut counts = Vec::new();
    let mut ok = true;
    let mut n4_time = Duration::ZERO;
    for n in 1..=4 {
        let start = Instant::now();
        let puf = build_puf_space(n, &caps).expect("within default cap");
        if n == 4 {
            n4_time = start.elapsed();
        }
        let count = puf.space.open_count();
        ok &= count == PUF_OPENS[n - 1]
            && count == oracle_upsets(n)
            && puf.space == upset_oracle(n).expect("oracle in range");
        counts.push(count);
    }
    ok &= n4_time < PUF_LIMIT;
    outcome(ok, format!("open counts {counts:?}, n=4 built in {n4_time:.2?}"))
}

fn criterion_2() -> Outcome {
    let caps = Caps::default();
    let start = Instant::now();
    let mut instances = 0u64;
    let mut violations = Vec::new();
    for space in spaces_up_to(3) {
        let n = space.n();
        for m in 0..=3 {
            let all: Vec<SetAssignment> = all_assignments(&space, m).collect();
            for a in &all {
                instances += 1;
                let f = companion_map(a);
                let oracle: Vec<u64> = (0..n)
                    .map(|x| (0..m).filter(|&i| a.set(i).bits() >> x & 1 == 1).fold(0, |acc, i| acc | 1 << i))
                    .collect();
                let values_ok = f.values().iter().map(|v| v.bits()).eq(oracle.iter().copied());
                let preimage_ok = f.preimage_identity() && (0..m).all(|i| f.preimage(i) == a.set(i));
                let continuity_ok = f.continuous() && f.to_map(&caps).is_ok_and(|g| g.is_certified());
                let u = verify_companion_unique(a, caps.exhaustive, 0);
                let unique_ok = u.regime == Regime::Exhaustive && u.holds();
                let restriction_ok = a.domain().subsets().all(|d| {
                    restrict_assignment(a, d).is_ok_and(|r| {
                        let trace_oracle = oracle.iter().zip(&r.trace).all(|(&o, t)| o & d.bits() == t.bits());
                        r.trace_agrees && trace_oracle && r.covering == r.covering_via_trace
                    })
                });
                let refinement_ok = all.iter().all(|b| {
                    is_refinement(a, b).is_ok_and(|r| {
                        let direct = (0..m).all(|i| a.set(i).bits() & !b.set(i).bits() == 0);
                        r.routes_agree() && r.direct == direct
                    })
                });
                for (name, ok) in [
                    ("values", values_ok),
                    ("preimage", preimage_ok),
                    ("continuity", continuity_ok),
                    ("uniqueness", unique_ok),
                    ("restriction", restriction_ok),
                    ("refinement", refinement_ok),
                ] {
                    if !ok && violations.len() < 5 {
                        violations.push(format!("{name} on {space:?} with {:?}", a.sets()));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && elapsed < COMPANION_LIMIT;
    outcome(pass, format!("{instances} assignments, violations {violations:?}, {elapsed:.2?}"))
}

type PullbackCase = (FiniteSpace, Vec<PointSet>);

fn criterion_3(pullbacks: &mut Vec<PullbackCase>) -> Outcome {
    let caps = Caps::default();
    let s = FiniteSpace::sierpinski();
    let sn = SetAssignment::neighborhood(&s, vec![PointSet::singleton(2, 0), s.full()]).expect("valid");
    let mut problems = Vec::new();
    if kernel_search(&sn).ok().flatten() != Some(PointSet::singleton(2, 1)) {
        problems.push("Sierpiński kernel".to_string());
    }
    if dspace_check(&s, caps.assignments, 0).status != DStatus::Yes {
        problems.push("Sierpiński verdict".to_string());
    }
    if dspace_check(&FiniteSpace::indiscrete(2), caps.assignments, 0).status != DStatus::No {
        problems.push("indiscrete verdict".to_string());
    }
    for n in 1..=4 {
        if dspace_check(&FiniteSpace::discrete(n), caps.assignments, 0).status != DStatus::Yes {
            problems.push(format!("discrete {n} verdict"));
        }
    }
    let mut assignments = 0u64;
    let mut seen = HashSet::new();
    let spaces = spaces_up_to(3);
    for space in &spaces {
        let opens = open_masks(space);
        let verdict = dspace_check(space, caps.assignments, 0);
        let exhaustive = verdict.assignments_total <= caps.assignments && verdict.status != DStatus::UnknownSampled;
        let mut all_witnessed = true;
        for n in neighborhood_assignments(space) {
            assignments += 1;
            let sets: Vec<u64> = n.sets().iter().map(|s| s.bits()).collect();
            let expected = oracle_kernel_exists(&opens, space.n(), &sets);
            let witness = characterization_witness(&n).expect("neighborhood assignment");
            all_witnessed &= witness.is_some();
            if witness.is_some() != expected {
                problems.push(format!("witness existence on {space:?} {sets:?}"));
                continue;
            }
            if let Some(w) = witness {
                let ok = w.holds()
                    && pullback_diagonal_check(&w, &caps).is_ok_and(|p| p.holds())
                    && oracle_closed(&opens, space.n(), w.d.bits())
                    && oracle_discrete(&opens, w.d.bits());
                if !ok {
                    problems.push(format!("witness on {space:?} {sets:?}"));
                }
                if seen.insert((space.clone(), w.g.clone())) {
                    pullbacks.push((space.clone(), sets.iter().map(|&b| PointSet::from_bits(space.n(), b).expect("in range")).collect()));
                }
            }
        }
        if !exhaustive || (verdict.status == DStatus::Yes) != all_witnessed {
            problems.push(format!("verdict disagreement on {space:?}"));
        }
    }
    problems.truncate(5);
    outcome(
        problems.is_empty(),
        format!("{} spaces, {assignments} neighborhood assignments, problems {problems:?}", spaces.len()),
    )
}

fn criterion_4() -> Outcome {
    let caps = Caps::default();
    let mut checked = 0;
    let mut d_spaces = 0;
    let mut problems = Vec::new();
    for space in spaces_up_to(4) {
        let opens = open_masks(&space);
        let (e, l) = (extent(&space), lindelof_degree(&space));
        let oracle = (oracle_extent(&opens, space.n()), oracle_lindelof(&space));
        let d = dspace_check(&space, caps.assignments, 0).status;
        checked += 1;
        if (e, l) != oracle || e > l {
            problems.push(format!("{space:?}: e={e} L={l} oracle {oracle:?}"));
        }
        if d == DStatus::Yes {
            d_spaces += 1;
            if e != l {
                problems.push(format!("{space:?}: D with e={e} L={l}"));
            }
        }
    }
    problems.truncate(5);
    outcome(problems.is_empty(), format!("{checked} spaces, {d_spaces} D-spaces, problems {problems:?}"))
}

fn criterion_5() -> Outcome {
    let mut problems = Vec::new();
    let spaces = spaces_up_to(3);
    let mut t1 = 0;
    for space in &spaces {
        let ex = exclusiveness(space);
        let is_t1 = oracle_t1(&open_masks(space), space.n());
        t1 += usize::from(is_t1);
        if !ex.agree() || (ex.kappa() >= 1) != is_t1 {
            problems.push(format!("{space:?}: {ex:?}, T1 {is_t1}"));
        }
    }
    outcome(problems.is_empty(), format!("{} spaces, {t1} T1, problems {problems:?}", spaces.len()))
}

fn criterion_6() -> Outcome {
    let caps = Caps::default();
    let mut problems = Vec::new();
    let (mut left, mut gls) = (0, 0);
    let spaces = spaces_up_to(3);
    for space in &spaces {
        let order = left_separated_search(space, &caps).expect("within cap");
        let relation = gls_search(space, &caps).expect("within cap");
        let d = dspace_check(space, caps.assignments, 0).status;
        if let Some(o) = &order {
            left += 1;
            if relation.is_none() || !order_as_relation(space.n(), o).validates(space) {
                problems.push(format!("{space:?}: left-separated but not GLS"));
            }
        }
        if let Some(r) = &relation {
            gls += 1;
            if !r.validates(space) || d != DStatus::Yes {
                problems.push(format!("{space:?}: GLS but not D"));
            }
        }
    }
    let ind = FiniteSpace::indiscrete(2);
    let strict = is_ad(&ind) && dspace_check(&ind, caps.assignments, 0).status == DStatus::No;
    if !strict {
        problems.push("indiscrete 2-point space is not aD without D".into());
    }
    outcome(
        problems.is_empty(),
        format!("{} spaces, {left} left-separated, {gls} GLS, aD but not D certified: {strict}", spaces.len()),
    )
}

fn criterion_7() -> Outcome {
    let mut runs = 0u64;
    let mut problems = Vec::new();
    for space in spaces_up_to(4) {
        let opens = open_masks(&space);
        if !oracle_t1(&opens, space.n()) {
            continue;
        }
        let n = space.n();
        for na in neighborhood_assignments(&space) {
            for order in (0..n).permutations(n) {
                runs += 1;
                let out = greedy_kernel(&na, &order).expect("valid order");
                let d = out.kernel.bits();
                let refined_ok = out.refinement.iter().enumerate().all(|(x, r)| {
                    r.bits() >> x & 1 == 1 && opens.contains(&r.bits()) && r.bits() & !na.set(x).bits() == 0
                });
                let cover = (0..n).filter(|x| d >> x & 1 == 1).fold(0, |acc, x| acc | out.refinement[x].bits());
                let valid = refined_ok
                    && cover == full_mask(n)
                    && oracle_closed(&opens, n, d)
                    && oracle_discrete(&opens, d);
                if !(out.success() && valid) && problems.len() < 5 {
                    problems.push(format!("{space:?} {:?} order {order:?}", na.sets()));
                }
            }
        }
    }
    let s = FiniteSpace::sierpinski();
    let sn = SetAssignment::neighborhood(&s, vec![PointSet::singleton(2, 0), s.full()]).expect("valid");
    let traces: Vec<String> = (0..3).map(|_| greedy_kernel(&sn, &[0, 1]).expect("valid").to_string()).collect();
    let stable = traces.iter().all(|t| t == SIERPINSKI_TRACE);
    if !stable {
        problems.push(format!("trace drifted: {:?}", traces[0]));
    }
    outcome(problems.is_empty(), format!("{runs} greedy runs on T1 spaces, trace stable {stable}, problems {problems:?}"))
}

fn criterion_8(pullbacks: &[PullbackCase]) -> Outcome {
    let caps = Caps::default();
    let mut problems = Vec::new();
    for (space, sets) in pullbacks {
        let n = SetAssignment::neighborhood(space, sets.clone()).expect("recorded assignment");
        let w = characterization_witness(&n).expect("valid").expect("recorded with a witness");
        let pb = pullback_diagonal_check(&w, &caps).expect("legs continuous").pullback;
        let ok = pb.ump_certificate().holds()
            && pb.product.ump_certificate().holds()
            && pb.equalizer.ump_certificate().holds();
        if !ok && problems.len() < 5 {
            problems.push(format!("UMP on {space:?} {sets:?}"));
        }
    }
    let spaces = spaces_up_to(3);
    let mut maps = 0;
    for a in &spaces {
        for b in &spaces {
            for f in continuous_maps(a, b) {
                maps += 1;
                let mono = is_mono(&f).expect("continuous");
                let epi = is_epi(&f).expect("continuous");
                let concrete = (f.values().iter().unique().count() == a.n(), f.values().iter().unique().count() == b.n());
                if !(mono.agree() && epi.agree()) || (mono.concrete, epi.concrete) != concrete {
                    problems.push(format!("mono/epi on {:?} from {a:?} to {b:?}", f.values()));
                }
            }
        }
    }
    let mut small = vec![FiniteSpace::empty()];
    small.extend(spaces_up_to(2));
    let mut composable = 0;
    for a in &small {
        for b in &small {
            for c in &small {
                for t1 in continuous_maps(a, b) {
                    for t2 in continuous_maps(b, c) {
                        composable += 1;
                        if !functor_check(&t1, &t2, &caps).is_ok_and(|r| r.holds()) {
                            problems.push(format!("functor on {:?} then {:?}", t1.values(), t2.values()));
                        }
                    }
                }
            }
        }
    }
    problems.truncate(5);
    outcome(
        problems.is_empty(),
        format!(
            "{} pullback certificates, {maps} maps for mono/epi, {composable} composable pairs, problems {problems:?}",
            pullbacks.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let caps = Caps::default();
    let spaces = spaces_up_to(3);
    let verdicts: Vec<DStatus> = spaces.iter().map(|s| dspace_check(s, caps.assignments, 0).status).collect();
    let mut surjections = 0;
    let mut problems = Vec::new();
    for (a, da) in spaces.iter().zip(&verdicts) {
        let opens_b: Vec<HashSet<u64>> = spaces.iter().map(open_masks).collect();
        for ((b, db), ob) in spaces.iter().zip(&verdicts).zip(&opens_b) {
            for f in continuous_maps(a, b) {
                let surjective = f.values().iter().unique().count() == b.n();
                let closed = a.opens().iter().all(|u| {
                    let c = full_mask(a.n()) & !u.bits();
                    let image = (0..a.n()).filter(|x| c >> x & 1 == 1).fold(0, |acc, x| acc | 1 << f.apply(x));
                    oracle_closed(ob, b.n(), image)
                });
                if surjective && closed {
                    surjections += 1;
                    if *da == DStatus::Yes && *db != DStatus::Yes {
                        problems.push(format!("{:?} from {a:?} onto {b:?}", f.values()));
                    }
                }
            }
        }
    }
    problems.truncate(5);
    outcome(problems.is_empty(), format!("{surjections} closed continuous surjections, violations {problems:?}"))
}

fn criterion_10() -> Outcome {
    let mut problems = Vec::new();
    let mut labeled = Vec::new();
    let mut unlabeled = Vec::new();
    for n in 1..=4 {
        let l = enumerate_topologies(n, Mode::Labeled).expect("within cap").len();
        let u = enumerate_topologies(n, Mode::UpToHomeomorphism).expect("within cap").len();
        let fams = oracle_topologies(n);
        if l != LABELED[n - 1] || l != fams.len() || u != UNLABELED[n - 1] || u != oracle_classes(n, &fams) {
            problems.push(format!("n={n}: {l} labeled, {u} unlabeled"));
        }
        labeled.push(l);
        unlabeled.push(u);
    }
    let start = Instant::now();
    let report = run_suite(&SuiteConfig { max_n: 4, seed: 7, ..SuiteConfig::default() }).expect("within suite cap");
    let elapsed = start.elapsed();
    if report.exit_code() != 0 {
        problems.extend(report.failing().map(|t| format!("{}: {:?}", t.id, t.first_violation)));
    }
    let pass = problems.is_empty() && elapsed < SUITE_LIMIT;
    outcome(
        pass,
        format!(
            "labeled {labeled:?}, unlabeled {unlabeled:?}, suite exit {} in {elapsed:.2?}, problems {problems:?}",
            report.exit_code()
        ),
    )
}

fn main() -> ExitCode {
    let mut pullbacks = Vec::new();
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let mut run = |id: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        println!("criterion {id:>2} [{}] {name}: {} ({elapsed:.2?})", if out.pass { "PASS" } else { "FAIL" }, out.detail);
        results.push((id, name, out, elapsed));
    };
    run(1, "puf open counts", &mut criterion_1);
    run(2, "companion calculus", &mut criterion_2);
    run(3, "D machinery", &mut || criterion_3(&mut pullbacks));
    run(4, "extent and Lindelöf degree", &mut criterion_4);
    run(5, "exclusiveness", &mut criterion_5);
    run(6, "implication chain", &mut criterion_6);
    run(7, "greedy recursion", &mut criterion_7);
    run(8, "category layer", &mut || criterion_8(&pullbacks));
    run(9, "closed images", &mut criterion_9);
    run(10, "catalog counts and suite", &mut criterion_10);
    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
