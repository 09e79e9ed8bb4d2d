//! Enumeration of every topology on a few points, canonical forms under
//! relabeling, and per-space fingerprints.

use itertools::Itertools;
use serde::Serialize;

use crate::caps::Caps;
use crate::covering::{
    exclusiveness, extent, gls_search, is_ad, left_separated_search, lindelof_degree, DStatus,
    Fingerprint, GlsRelation,
};
use crate::dspace::dspace_check;
use crate::error::{Result, TopoError};
use crate::set::PointSet;
use crate::space::{separation_level, FiniteSpace};

/// Largest point count accepted by [`enumerate_topologies`].
pub const MAX_CATALOG_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Labeled,
    UpToHomeomorphism,
}

/// A family of subsets of `0..n` (`n ≤ 5`) as a bit mask indexed by subset code.
type Family = u64;

fn close_with(family: Family, s: u64, n: usize) -> Family {
    let mut fam = family;
    let mut work = vec![s];
    while let Some(a) = work.pop() {
        if fam >> a & 1 == 1 {
            continue;
        }
        fam |= 1 << a;
        for b in 0..1u64 << n {
            if fam >> b & 1 == 1 {
                for c in [a | b, a & b] {
                    if fam >> c & 1 == 0 {
                        work.push(c);
                    }
                }
            }
        }
    }
    fam
}

fn labeled_families(n: usize) -> Vec<Family> {
    let full = (1u64 << n) - 1;
    let base = close_with(close_with(0, 0, n), full, n);
    let candidates: Vec<u64> = (1..full).collect();
    let mut out = Vec::new();
    fn go(i: usize, fam: Family, excluded: Family, cands: &[u64], n: usize, out: &mut Vec<Family>) {
        let Some(&s) = cands.get(i) else {
            out.push(fam);
            return;
        };
        if fam >> s & 1 == 1 {
            return go(i + 1, fam, excluded, cands, n, out);
        }
        go(i + 1, fam, excluded | 1 << s, cands, n, out);
        let grown = close_with(fam, s, n);
        if grown & excluded == 0 {
            go(i + 1, grown, excluded, cands, n, out);
        }
    }
    go(0, base, 0, &candidates, n, &mut out);
    out
}

fn family_space(n: usize, fam: Family) -> FiniteSpace {
    let opens = (0..1u64 << n)
        .filter(|s| fam >> s & 1 == 1)
        .map(|s| PointSet::from_bits(n, s).expect("in range"));
    FiniteSpace::from_opens_unchecked(n, opens)
}

fn space_family(space: &FiniteSpace) -> Family {
    space.opens().iter().fold(0, |acc, u| acc | 1 << u.bits())
}

fn relabel_family(n: usize, fam: Family, perm: &[usize]) -> Family {
    (0..1u64 << n)
        .filter(|s| fam >> s & 1 == 1)
        .fold(0, |acc, s| {
            let t = (0..n)
                .filter(|&i| s >> i & 1 == 1)
                .fold(0u64, |t, i| t | 1 << perm[i]);
            acc | 1 << t
        })
}

fn canonical_family(n: usize, fam: Family) -> Family {
    (0..n)
        .permutations(n)
        .map(|p| relabel_family(n, fam, &p))
        .min()
        .unwrap_or(fam)
}

fn check_points(n: usize) -> Result<()> {
    if n > MAX_CATALOG_POINTS {
        return Err(TopoError::Resource {
            what: "catalog points",
            requested: n,
            cap: MAX_CATALOG_POINTS,
        });
    }
    Ok(())
}

/// Every topology on `n` points. Unlabeled mode returns each class's canonical
/// representative, sorted by canonical encoding.
pub fn enumerate_topologies(n: usize, mode: Mode) -> Result<Vec<FiniteSpace>> {
    check_points(n)?;
    let fams = labeled_families(n);
    Ok(match mode {
        Mode::Labeled => fams.into_iter().map(|f| family_space(n, f)).collect(),
        Mode::UpToHomeomorphism => fams
            .into_iter()
            .map(|f| canonical_family(n, f))
            .sorted()
            .dedup()
            .map(|f| family_space(n, f))
            .collect(),
    })
}

/// Stable identifier of a space's relabeling class: `n` and the least open-family
/// encoding over all relabelings, in hex.
pub fn canonical_hash(space: &FiniteSpace) -> Result<String> {
    check_points(space.n())?;
    Ok(format!(
        "{}:{:x}",
        space.n(),
        canonical_family(space.n(), space_family(space))
    ))
}

/// The canonical representative of the space's relabeling class.
pub fn canonicalize(space: &FiniteSpace) -> Result<FiniteSpace> {
    check_points(space.n())?;
    Ok(family_space(
        space.n(),
        canonical_family(space.n(), space_family(space)),
    ))
}

/// A relabeling `perm` with `perm(U)` open in `b` exactly when `U` is open in `a`.
pub fn find_homeomorphism(a: &FiniteSpace, b: &FiniteSpace) -> Option<Vec<usize>> {
    if a.n() != b.n() || a.open_count() != b.open_count() {
        return None;
    }
    let n = a.n();
    (0..n)
        .permutations(n)
        .find(|p| a.opens().iter().all(|u| b.is_open(u.relabel(p))))
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Witnesses {
    pub kernel_counterexample: Option<Vec<PointSet>>,
    pub gls: Option<GlsRelation>,
    pub left_separated_order: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogRecord {
    pub space: FiniteSpace,
    pub canonical_hash: String,
    pub fingerprint: Fingerprint,
    pub assignments_checked: u128,
    pub assignments_total: u128,
    pub witnesses: Witnesses,
}

/// Every fingerprint field. The D verdict is exhaustive up to `caps.assignments`
/// neighborhood assignments, else `samples` seeded draws.
pub fn fingerprint(
    space: &FiniteSpace,
    caps: &Caps,
    samples: u128,
    seed: u64,
) -> Result<CatalogRecord> {
    let sep = separation_level(space);
    let budget = if crate::dspace::neighborhood_assignment_count(space) <= caps.assignments {
        caps.assignments
    } else {
        samples
    };
    let verdict = dspace_check(space, budget, seed);
    let (gls, order) = if space.n() <= caps.order_search {
        (
            gls_search(space, caps)?,
            left_separated_search(space, caps)?,
        )
    } else {
        (None, None)
    };
    let searched = space.n() <= caps.order_search;
    let fingerprint = Fingerprint {
        t0: sep.t0,
        t1: sep.t1,
        extent: extent(space),
        lindelof_degree: lindelof_degree(space),
        exclusiveness: exclusiveness(space).kappa(),
        is_d: verdict.status,
        is_ad: is_ad(space),
        gls: searched.then_some(gls.is_some()),
        left_separated: searched.then_some(order.is_some()),
        open_count: space.open_count(),
    };
    Ok(CatalogRecord {
        space: space.clone(),
        canonical_hash: canonical_hash(space)?,
        fingerprint,
        assignments_checked: verdict.assignments_checked,
        assignments_total: verdict.assignments_total,
        witnesses: Witnesses {
            kernel_counterexample: (verdict.status == DStatus::No)
                .then_some(verdict.counterexample)
                .flatten(),
            gls,
            left_separated_order: order,
        },
    })
}
