//! The principal-ultrafilter topology on the power set of a finite ground set.
//!
//! A subset `A ⊆ {0..n}` is the integer code whose bit `i` is set iff `i ∈ A`;
//! the power set is the space on `2^n` such codes. The topology is generated by
//! the sets `U(x) = { A : x ∈ A }`.

use serde::Serialize;

use crate::caps::Caps;
use crate::category::ContinuousMap;
use crate::error::{Result, TopoError};
use crate::set::PointSet;
use crate::space::{generate_topology, FiniteSpace};

/// A point of the power set: the code of a subset of an `n`-point ground set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PowerSetPoint {
    ground_size: usize,
    code: usize,
}

impl PowerSetPoint {
    pub fn new(ground_size: usize, code: usize) -> Result<Self> {
        if ground_size >= usize::BITS as usize || code >> ground_size != 0 {
            return Err(TopoError::input(format!(
                "code {code} is not a subset of {ground_size} points"
            )));
        }
        Ok(PowerSetPoint { ground_size, code })
    }

    pub fn from_set(set: PointSet) -> Self {
        PowerSetPoint {
            ground_size: set.universe(),
            code: set.bits() as usize,
        }
    }

    pub fn ground_size(self) -> usize {
        self.ground_size
    }

    pub fn code(self) -> usize {
        self.code
    }

    pub fn to_set(self) -> PointSet {
        PointSet::from_bits(self.ground_size, self.code as u64).expect("code fits the ground set")
    }
}

#[derive(Debug, Clone)]
pub struct PufSpace {
    pub ground_size: usize,
    pub space: FiniteSpace,
    /// `subbase[x] = U(x)`.
    pub subbase: Vec<PointSet>,
}

impl PufSpace {
    pub fn point_count(&self) -> usize {
        1 << self.ground_size
    }

    pub fn ultrafilter(&self, x: usize) -> PointSet {
        self.subbase[x]
    }
}

fn check_ground(n: usize, caps: &Caps) -> Result<()> {
    if n > caps.puf_bits {
        return Err(TopoError::Resource {
            what: "power-set ground size",
            requested: n,
            cap: caps.puf_bits,
        });
    }
    Ok(())
}

/// `U(x)`: the codes with bit `x` set.
pub fn principal_ultrafilter(n: usize, x: usize) -> Result<PointSet> {
    if x >= n {
        return Err(TopoError::input(format!(
            "point {x} is outside a ground set of {n} points"
        )));
    }
    if n > 6 {
        return Err(TopoError::Resource {
            what: "power-set ground size",
            requested: n,
            cap: 6,
        });
    }
    let mask = (0..1u64 << n)
        .filter(|c| c >> x & 1 == 1)
        .fold(0u64, |m, c| m | 1 << c);
    Ok(PointSet::from_bits_truncate(1 << n, mask))
}

/// Builds `P(X)` with the topology generated by the principal ultrafilters.
pub fn build_puf_space(n: usize, caps: &Caps) -> Result<PufSpace> {
    if n == 0 {
        return Err(TopoError::input(
            "the power-set space needs a nonempty ground set",
        ));
    }
    check_ground(n, caps)?;
    let subbase: Vec<PointSet> = (0..n)
        .map(|x| principal_ultrafilter(n, x))
        .collect::<Result<_>>()?;
    let space = generate_topology(1 << n, &subbase)?;
    Ok(PufSpace {
        ground_size: n,
        space,
        subbase,
    })
}

/// The puf space on `m` points without the `n ≥ 1` restriction: `P(∅)` is the one-point space.
pub(crate) fn puf_target(m: usize, caps: &Caps) -> Result<FiniteSpace> {
    if m == 0 {
        return Ok(FiniteSpace::point());
    }
    Ok(build_puf_space(m, caps)?.space)
}

/// Whether a family of codes is closed upward under inclusion.
pub fn is_upset(n: usize, family: PointSet) -> bool {
    let f = family.bits();
    family
        .iter()
        .all(|a| (0..n).all(|x| a >> x & 1 == 1 || f >> (a | 1 << x) & 1 == 1))
}

/// Every up-closed family of subsets, found by testing all `2^(2^n)` families.
pub fn upset_oracle(n: usize) -> Result<FiniteSpace> {
    if n > 4 {
        return Err(TopoError::Resource {
            what: "oracle ground size",
            requested: n,
            cap: 4,
        });
    }
    let points = 1usize << n;
    let families = (0u64..1 << points)
        .map(|bits| PointSet::from_bits_truncate(points, bits))
        .filter(|&fam| {
            fam.iter()
                .all(|a| (0..points).all(|b| b & a != a || fam.contains(b)))
        });
    FiniteSpace::from_opens(points, families)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShrinkEntry {
    pub x: usize,
    pub preimage: PointSet,
    pub equals_ultrafilter: bool,
    pub preimage_open: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShrinkReport {
    pub entries: Vec<ShrinkEntry>,
    /// Whether `R` is continuous on the whole power-set space.
    pub continuous: bool,
}

impl ShrinkReport {
    pub fn all_equal(&self) -> bool {
        self.entries.iter().all(|e| e.equals_ultrafilter)
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &ShrinkEntry> {
        self.entries.iter().filter(|e| !e.equals_ultrafilter)
    }
}

/// Checks `R⁻¹(U(x))` against `U(x)` for a self-map `R` of `P(X)` given as a code table.
pub fn check_shrink_map(n: usize, r: &[usize], caps: &Caps) -> Result<ShrinkReport> {
    let puf = build_puf_space(n, caps)?;
    let points = puf.point_count();
    if r.len() != points {
        return Err(TopoError::input(format!(
            "shrink map has {} entries, expected {points}",
            r.len()
        )));
    }
    let offending: Vec<String> = r
        .iter()
        .enumerate()
        .filter(|&(a, &ra)| ra >= points || ra & !a != 0)
        .map(|(a, _)| {
            PowerSetPoint {
                ground_size: n,
                code: a,
            }
            .to_set()
            .to_string()
        })
        .collect();
    if !offending.is_empty() {
        return Err(TopoError::precondition(format!(
            "R(A) ⊄ A for A in {}",
            offending.join(", ")
        )));
    }
    let map = ContinuousMap::new(puf.space.clone(), puf.space.clone(), r.to_vec())?;
    let entries = (0..n)
        .map(|x| {
            let preimage = map.preimage(puf.ultrafilter(x));
            ShrinkEntry {
                x,
                preimage,
                equals_ultrafilter: preimage == puf.ultrafilter(x),
                preimage_open: puf.space.is_open(preimage),
            }
        })
        .collect();
    Ok(ShrinkReport {
        entries,
        continuous: map.is_certified(),
    })
}

/// `A ↦ A ∩ D` from `P(X)` to `P(D)`, with `D` re-indexed in increasing order.
#[derive(Debug, Clone)]
pub struct TraceMap {
    pub map: ContinuousMap,
    pub d: PointSet,
    /// For each `d ∈ D` in order: whether `S⁻¹(U_D(d)) = U_X(d)`.
    pub preimage_checks: Vec<(usize, bool)>,
}

impl TraceMap {
    pub fn certified(&self) -> bool {
        self.map.is_certified() && self.preimage_checks.iter().all(|&(_, ok)| ok)
    }
}

/// Compresses the bits of `code` selected by `d` into consecutive low bits.
pub(crate) fn compress(code: u64, d: PointSet) -> u64 {
    d.iter()
        .enumerate()
        .fold(0, |acc, (i, p)| acc | (code >> p & 1) << i)
}

pub fn trace_map(n: usize, d: PointSet, caps: &Caps) -> Result<TraceMap> {
    d.ensure_universe(n)?;
    let source = build_puf_space(n, caps)?;
    let target = puf_target(d.len(), caps)?;
    let values = (0..source.point_count())
        .map(|a| compress(a as u64, d) as usize)
        .collect();
    let map = ContinuousMap::new(source.space.clone(), target, values)?;
    let preimage_checks = d
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ud = principal_ultrafilter(d.len(), i).expect("index inside D");
            (p, map.preimage(ud) == source.ultrafilter(p))
        })
        .collect();
    Ok(TraceMap {
        map,
        d,
        preimage_checks,
    })
}

/// `A ↦ t(A)` from `P(X)` to `P(Y)`.
#[derive(Debug, Clone)]
pub struct ImageMap {
    pub map: ContinuousMap,
    /// For each `y`: whether `T⁻¹(U_Y(y))` is the union of `U_X(x)` over the fiber of `y`.
    pub fiber_checks: Vec<bool>,
}

impl ImageMap {
    pub fn certified(&self) -> bool {
        self.map.is_certified() && self.fiber_checks.iter().all(|&ok| ok)
    }
}

fn image_code(t: &[usize], a: usize) -> usize {
    t.iter()
        .enumerate()
        .filter(|&(x, _)| a >> x & 1 == 1)
        .fold(0, |acc, (_, &y)| acc | 1 << y)
}

/// The image map of a point function `t: {0..t.len()} → {0..target_n}`.
pub fn image_map(t: &[usize], target_n: usize, caps: &Caps) -> Result<ImageMap> {
    if let Some(&y) = t.iter().find(|&&y| y >= target_n) {
        return Err(TopoError::input(format!(
            "t sends a point to {y}, outside {target_n} points"
        )));
    }
    let n = t.len();
    let source = puf_target(n, caps)?;
    let target = puf_target(target_n, caps)?;
    let values = (0..1usize << n).map(|a| image_code(t, a)).collect();
    let map = ContinuousMap::new(source, target.clone(), values)?;
    let fiber_checks = (0..target_n)
        .map(|y| {
            let uy = principal_ultrafilter(target_n, y).expect("y in range");
            let expected = (0..n)
                .filter(|&x| t[x] == y)
                .map(|x| principal_ultrafilter(n, x).expect("x in range"))
                .fold(PointSet::empty(1 << n), PointSet::union);
            map.preimage(uy) == expected
        })
        .collect();
    Ok(ImageMap { map, fiber_checks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub identity_law: bool,
    pub composition_law: bool,
}

impl FunctorReport {
    pub fn holds(&self) -> bool {
        self.identity_law && self.composition_law
    }
}

/// Checks `F(id) = id` and `F(t2 ∘ t1) = F(t2) ∘ F(t1)` extensionally.
pub fn functor_check(t1: &ContinuousMap, t2: &ContinuousMap, caps: &Caps) -> Result<FunctorReport> {
    for t in [t1, t2] {
        if !t.is_certified() {
            return Err(TopoError::precondition(format!(
                "map {:?} is not continuous",
                t.values()
            )));
        }
    }
    let composite = t1.then(t2)?;
    let f1 = image_map(t1.values(), t1.codomain().n(), caps)?;
    let f2 = image_map(t2.values(), t2.codomain().n(), caps)?;
    let f12 = image_map(composite.values(), composite.codomain().n(), caps)?;
    let identity_law = [t1.domain(), t2.domain(), t2.codomain()].iter().all(|sp| {
        let id: Vec<usize> = (0..sp.n()).collect();
        image_map(&id, sp.n(), caps)
            .map(|m| m.map.values().iter().enumerate().all(|(a, &b)| a == b))
            .unwrap_or(false)
    });
    let composition_law =
        (0..f1.map.domain().n()).all(|a| f12.map.apply(a) == f2.map.apply(f1.map.apply(a)));
    Ok(FunctorReport {
        identity_law,
        composition_law,
    })
}
