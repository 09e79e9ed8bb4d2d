//! The finite category of spaces: continuous maps and the finite limits built from them.
//!
//! Universal properties are certified against probe spaces of at most two
//! points plus each construction's own cone. A certificate enumerates every
//! continuous candidate out of the probe and counts the ones that make the
//! diagram commute; the count must be exactly one per cone.

use std::fmt;

use serde::Serialize;

use crate::error::{Result, TopoError};
use crate::set::PointSet;
use crate::space::{generate_topology, subspace, FiniteSpace};

/// A point function between finite spaces, with its continuity verdict.
#[derive(Clone, PartialEq, Eq)]
pub struct ContinuousMap {
    domain: FiniteSpace,
    codomain: FiniteSpace,
    values: Vec<usize>,
    certified: bool,
}

impl fmt::Debug for ContinuousMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ContinuousMap({} -> {}, {:?}, certified={})",
            self.domain.n(),
            self.codomain.n(),
            self.values,
            self.certified
        )
    }
}

impl ContinuousMap {
    /// Checks ranges and records whether the function is continuous.
    pub fn new(domain: FiniteSpace, codomain: FiniteSpace, values: Vec<usize>) -> Result<Self> {
        if values.len() != domain.n() {
            return Err(TopoError::input(format!(
                "map has {} values for a domain of {} points",
                values.len(),
                domain.n()
            )));
        }
        if let Some((x, &v)) = values.iter().enumerate().find(|(_, &v)| v >= codomain.n()) {
            return Err(TopoError::input(format!(
                "point {x} maps to {v}, outside a codomain of {} points",
                codomain.n()
            )));
        }
        let mut map = ContinuousMap {
            domain,
            codomain,
            values,
            certified: false,
        };
        map.certified = offending_open(&map).is_none();
        Ok(map)
    }

    /// Like [`ContinuousMap::new`], but a discontinuous function is an error.
    pub fn certify(domain: FiniteSpace, codomain: FiniteSpace, values: Vec<usize>) -> Result<Self> {
        let map = Self::new(domain, codomain, values)?;
        match offending_open(&map) {
            None => Ok(map),
            Some(u) => Err(TopoError::precondition(format!(
                "map {:?} is not continuous: preimage of open {u} is not open",
                map.values
            ))),
        }
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        ContinuousMap {
            domain: space.clone(),
            codomain: space.clone(),
            values: (0..space.n()).collect(),
            certified: true,
        }
    }

    pub fn constant(domain: &FiniteSpace, codomain: &FiniteSpace, value: usize) -> Result<Self> {
        Self::new(domain.clone(), codomain.clone(), vec![value; domain.n()])
    }

    pub fn domain(&self) -> &FiniteSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSpace {
        &self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn preimage(&self, set: PointSet) -> PointSet {
        let mut out = self.domain.empty_set();
        for (x, &v) in self.values.iter().enumerate() {
            if set.contains(v) {
                out = out.with(x);
            }
        }
        out
    }

    pub fn image(&self, set: PointSet) -> PointSet {
        set.iter()
            .fold(self.codomain.empty_set(), |acc, x| acc.with(self.values[x]))
    }

    /// `then ∘ self`. Certification carries over without re-checking.
    pub fn then(&self, then: &ContinuousMap) -> Result<ContinuousMap> {
        if self.codomain != then.domain {
            return Err(TopoError::input(
                "composition of maps whose codomain and domain differ",
            ));
        }
        Ok(ContinuousMap {
            domain: self.domain.clone(),
            codomain: then.codomain.clone(),
            values: self.values.iter().map(|&v| then.values[v]).collect(),
            certified: self.certified && then.certified,
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.codomain.empty_set();
        for &v in &self.values {
            if seen.contains(v) {
                return false;
            }
            seen = seen.with(v);
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        self.image(self.domain.full()).is_full()
    }

    /// Image of every closed set is closed.
    pub fn is_closed_map(&self) -> bool {
        self.domain
            .closed_sets()
            .all(|c| self.codomain.is_closed(self.image(c)))
    }
}

/// First codomain open (subbasic, when the codomain declares a subbase) whose preimage is not open.
fn offending_open(map: &ContinuousMap) -> Option<PointSet> {
    let tests: &[PointSet] = map.codomain.subbase().unwrap_or(map.codomain.opens());
    tests
        .iter()
        .copied()
        .find(|u| !map.domain.is_open(map.preimage(*u)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityCheck {
    pub continuous: bool,
    pub offending_open: Option<PointSet>,
}

pub fn check_continuous(map: &ContinuousMap) -> ContinuityCheck {
    let offending = offending_open(map);
    ContinuityCheck {
        continuous: offending.is_none(),
        offending_open: offending,
    }
}

/// Every function `from → to`, in lexicographic order of value vectors.
fn all_functions(from: usize, to: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if from == 0 {
        1
    } else if to == 0 {
        0
    } else {
        to.pow(from as u32)
    };
    (0..total).map(move |mut code| {
        let mut v = vec![0; from];
        for slot in v.iter_mut().rev() {
            *slot = code % to;
            code /= to;
        }
        v
    })
}

/// Every continuous map between two spaces.
pub fn continuous_maps(from: &FiniteSpace, to: &FiniteSpace) -> Vec<ContinuousMap> {
    all_functions(from.n(), to.n())
        .filter_map(|v| ContinuousMap::new(from.clone(), to.clone(), v).ok())
        .filter(|m| m.certified)
        .collect()
}

pub fn count_continuous_maps(from: &FiniteSpace, to: &FiniteSpace) -> usize {
    continuous_maps(from, to).len()
}

/// All topologies on at most two points (labeled): the probes for universal properties.
pub fn probe_spaces() -> Vec<FiniteSpace> {
    let mut out: Vec<FiniteSpace> = Vec::new();
    for n in 0..=2usize {
        let subsets: Vec<PointSet> = PointSet::full(n).subsets().collect();
        for pick in 0u64..(1 << subsets.len()) {
            let sb: Vec<PointSet> = (0..subsets.len())
                .filter(|i| pick >> i & 1 == 1)
                .map(|i| subsets[i])
                .collect();
            let sp = generate_topology(n, &sb).expect("small subbase");
            let sp = FiniteSpace::from_opens(n, sp.opens().iter().copied()).expect("valid");
            if !out.contains(&sp) {
                out.push(sp);
            }
        }
    }
    out
}

fn require_certified(map: &ContinuousMap) -> Result<()> {
    if map.certified {
        Ok(())
    } else {
        Err(TopoError::precondition(format!(
            "map {:?} is not continuous",
            map.values
        )))
    }
}

/// Concrete and categorical answers to a mono/epi question; they must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MorphismCheck {
    pub concrete: bool,
    pub categorical: bool,
}

impl MorphismCheck {
    pub fn agree(&self) -> bool {
        self.concrete == self.categorical
    }
}

pub fn is_mono(map: &ContinuousMap) -> Result<MorphismCheck> {
    require_certified(map)?;
    let mut categorical = true;
    'probes: for probe in probe_spaces() {
        let into = continuous_maps(&probe, map.domain());
        for (i, g) in into.iter().enumerate() {
            for h in &into[i + 1..] {
                let fg: Vec<usize> = g.values.iter().map(|&v| map.apply(v)).collect();
                let fh: Vec<usize> = h.values.iter().map(|&v| map.apply(v)).collect();
                if fg == fh {
                    categorical = false;
                    break 'probes;
                }
            }
        }
    }
    Ok(MorphismCheck {
        concrete: map.is_injective(),
        categorical,
    })
}

pub fn is_epi(map: &ContinuousMap) -> Result<MorphismCheck> {
    require_certified(map)?;
    let mut categorical = true;
    'probes: for probe in probe_spaces() {
        let out = continuous_maps(map.codomain(), &probe);
        for (i, g) in out.iter().enumerate() {
            for h in &out[i + 1..] {
                let agree_on_image = map.values.iter().all(|&v| g.apply(v) == h.apply(v));
                if agree_on_image {
                    categorical = false;
                    break 'probes;
                }
            }
        }
    }
    Ok(MorphismCheck {
        concrete: map.is_surjective(),
        categorical,
    })
}

#[derive(Debug, Clone)]
pub struct InitialTerminal {
    pub initial: FiniteSpace,
    pub terminal: FiniteSpace,
    /// Number of continuous maps from the initial object into the test space.
    pub maps_from_initial: usize,
    /// Number of continuous maps from the test space into the terminal object.
    pub maps_to_terminal: usize,
}

impl InitialTerminal {
    pub fn certified(&self) -> bool {
        self.maps_from_initial == 1 && self.maps_to_terminal == 1
    }
}

pub fn initial_terminal(test: &FiniteSpace) -> InitialTerminal {
    let initial = FiniteSpace::empty();
    let terminal = FiniteSpace::point();
    InitialTerminal {
        maps_from_initial: count_continuous_maps(&initial, test),
        maps_to_terminal: count_continuous_maps(test, &terminal),
        initial,
        terminal,
    }
}

/// Outcome of checking a universal property cone by cone.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct UmpCertificate {
    pub cones_checked: usize,
    pub failures: Vec<String>,
}

impl UmpCertificate {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, count: usize, what: impl FnOnce() -> String) {
        self.cones_checked += 1;
        if count != 1 {
            self.failures
                .push(format!("{} mediating maps for {}", count, what()));
        }
    }
}

/// Continuous maps `from → to` satisfying a pointwise constraint, counted by
/// enumerating only the allowed values at each point.
fn count_constrained(from: &FiniteSpace, to: &FiniteSpace, allowed: &[Vec<usize>]) -> usize {
    let mut count = 0;
    let mut idx = vec![0usize; allowed.len()];
    if allowed.iter().any(|a| a.is_empty()) {
        return 0;
    }
    loop {
        let values: Vec<usize> = idx.iter().zip(allowed).map(|(&i, a)| a[i]).collect();
        if ContinuousMap::new(from.clone(), to.clone(), values)
            .map(|m| m.certified)
            .unwrap_or(false)
        {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return count;
            }
            idx[k] += 1;
            if idx[k] < allowed[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The product of two spaces with its projections.
#[derive(Debug, Clone)]
pub struct Product {
    pub space: FiniteSpace,
    pub pi1: ContinuousMap,
    pub pi2: ContinuousMap,
    left: FiniteSpace,
    right: FiniteSpace,
}

impl Product {
    /// Carrier index of the pair `(a, b)` (row-major).
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.right.n() + b
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        (i / self.right.n(), i % self.right.n())
    }

    /// Checks the product property against every cone from the probe spaces and the
    /// projections' own cone.
    pub fn ump_certificate(&self) -> UmpCertificate {
        let mut cert = UmpCertificate::default();
        for probe in probe_spaces() {
            let candidates = continuous_maps(&probe, &self.space);
            let to_left = continuous_maps(&probe, &self.left);
            let to_right = continuous_maps(&probe, &self.right);
            for pa in &to_left {
                for pb in &to_right {
                    let count = candidates
                        .iter()
                        .filter(|u| {
                            u.values.iter().enumerate().all(|(z, &p)| {
                                self.pi1.apply(p) == pa.apply(z) && self.pi2.apply(p) == pb.apply(z)
                            })
                        })
                        .count();
                    cert.record(count, || format!("cone ({:?}, {:?})", pa.values, pb.values));
                }
            }
        }
        let allowed: Vec<Vec<usize>> = (0..self.space.n())
            .map(|p| {
                (0..self.space.n())
                    .filter(|&q| {
                        self.pi1.apply(q) == self.pi1.apply(p)
                            && self.pi2.apply(q) == self.pi2.apply(p)
                    })
                    .collect()
            })
            .collect();
        let count = count_constrained(&self.space, &self.space, &allowed);
        cert.record(count, || "the projection cone".to_string());
        cert
    }
}

/// Product topology on `a × b`, generated by the open rectangles `U × V`.
pub fn product(a: &FiniteSpace, b: &FiniteSpace) -> Result<Product> {
    let (na, nb) = (a.n(), b.n());
    let total = na * nb;
    if total > crate::set::MAX_UNIVERSE {
        return Err(TopoError::Resource {
            what: "product points",
            requested: total,
            cap: crate::set::MAX_UNIVERSE,
        });
    }
    let mut rects = Vec::new();
    for u in a.opens() {
        for v in b.opens() {
            let mut r = PointSet::empty(total);
            for x in u.iter() {
                for y in v.iter() {
                    r = r.with(x * nb + y);
                }
            }
            rects.push(r);
        }
    }
    let generated = generate_topology(total, &rects)?;
    let space = FiniteSpace::from_opens(total, generated.opens().iter().copied())?;
    let pi1 = ContinuousMap::new(
        space.clone(),
        a.clone(),
        (0..total).map(|i| i / nb.max(1)).collect(),
    )?;
    let pi2 = ContinuousMap::new(
        space.clone(),
        b.clone(),
        (0..total).map(|i| i % nb.max(1)).collect(),
    )?;
    Ok(Product {
        space,
        pi1,
        pi2,
        left: a.clone(),
        right: b.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct Equalizer {
    pub space: FiniteSpace,
    pub iota: ContinuousMap,
    /// Domain points where the two maps agree, increasing.
    pub carrier: Vec<usize>,
    f: ContinuousMap,
    g: ContinuousMap,
}

impl Equalizer {
    pub fn ump_certificate(&self) -> UmpCertificate {
        let mut cert = UmpCertificate::default();
        let domain = self.f.domain();
        let mut cones: Vec<(FiniteSpace, ContinuousMap)> = Vec::new();
        for probe in probe_spaces() {
            for z in continuous_maps(&probe, domain) {
                if z.values.iter().all(|&x| self.f.apply(x) == self.g.apply(x)) {
                    cones.push((probe.clone(), z));
                }
            }
        }
        for (probe, z) in &cones {
            let allowed: Vec<Vec<usize>> = z
                .values
                .iter()
                .map(|&x| {
                    (0..self.space.n())
                        .filter(|&e| self.iota.apply(e) == x)
                        .collect()
                })
                .collect();
            // Every function into E is enumerated when the probe is small.
            let count = continuous_maps(probe, &self.space)
                .iter()
                .filter(|u| {
                    u.values
                        .iter()
                        .zip(&z.values)
                        .all(|(&e, &x)| self.iota.apply(e) == x)
                })
                .count();
            debug_assert_eq!(count, count_constrained(probe, &self.space, &allowed));
            cert.record(count, || format!("probe map {:?}", z.values));
        }
        let allowed: Vec<Vec<usize>> = (0..self.space.n())
            .map(|e| {
                (0..self.space.n())
                    .filter(|&q| self.iota.apply(q) == self.iota.apply(e))
                    .collect()
            })
            .collect();
        cert.record(
            count_constrained(&self.space, &self.space, &allowed),
            || "the inclusion cone".into(),
        );
        cert
    }
}

/// Equalizer of two parallel maps: the agreement set with the subspace topology.
pub fn equalizer(f: &ContinuousMap, g: &ContinuousMap) -> Result<Equalizer> {
    if f.domain() != g.domain() || f.codomain() != g.codomain() {
        return Err(TopoError::input("equalizer of maps that are not parallel"));
    }
    require_certified(f)?;
    require_certified(g)?;
    let domain = f.domain();
    let agree = (0..domain.n())
        .filter(|&x| f.apply(x) == g.apply(x))
        .fold(domain.empty_set(), |acc, x| acc.with(x));
    let sub = subspace(domain, agree)?;
    let iota = ContinuousMap::new(sub.space.clone(), domain.clone(), sub.points.clone())?;
    Ok(Equalizer {
        space: sub.space,
        iota,
        carrier: sub.points,
        f: f.clone(),
        g: g.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct Pullback {
    pub space: FiniteSpace,
    pub p1: ContinuousMap,
    pub p2: ContinuousMap,
    /// Carrier pairs `(a, b)` with `f(a) = g(b)`, in row-major order.
    pub carrier: Vec<(usize, usize)>,
    pub product: Product,
    pub equalizer: Equalizer,
    f: ContinuousMap,
    g: ContinuousMap,
}

impl Pullback {
    pub fn commutes(&self) -> bool {
        (0..self.space.n())
            .all(|p| self.f.apply(self.p1.apply(p)) == self.g.apply(self.p2.apply(p)))
    }

    pub fn ump_certificate(&self) -> UmpCertificate {
        let mut cert = UmpCertificate::default();
        let a = self.f.domain();
        let b = self.g.domain();
        for probe in probe_spaces() {
            let candidates = continuous_maps(&probe, &self.space);
            let to_a = continuous_maps(&probe, a);
            let to_b = continuous_maps(&probe, b);
            for za in &to_a {
                for zb in &to_b {
                    let square = (0..probe.n())
                        .all(|z| self.f.apply(za.apply(z)) == self.g.apply(zb.apply(z)));
                    if !square {
                        continue;
                    }
                    let count = candidates
                        .iter()
                        .filter(|u| {
                            u.values.iter().enumerate().all(|(z, &p)| {
                                self.p1.apply(p) == za.apply(z) && self.p2.apply(p) == zb.apply(z)
                            })
                        })
                        .count();
                    cert.record(count, || format!("cone ({:?}, {:?})", za.values, zb.values));
                }
            }
        }
        let allowed: Vec<Vec<usize>> = (0..self.space.n())
            .map(|p| {
                (0..self.space.n())
                    .filter(|&q| {
                        self.p1.apply(q) == self.p1.apply(p) && self.p2.apply(q) == self.p2.apply(p)
                    })
                    .collect()
            })
            .collect();
        cert.record(
            count_constrained(&self.space, &self.space, &allowed),
            || "the pullback cone".into(),
        );
        cert
    }
}

/// Pullback of `f: A → C` and `g: B → C`, computed as the equalizer of `f∘π_A` and `g∘π_B`.
pub fn pullback(f: &ContinuousMap, g: &ContinuousMap) -> Result<Pullback> {
    if f.codomain() != g.codomain() {
        return Err(TopoError::input(
            "pullback of maps with different codomains",
        ));
    }
    require_certified(f)?;
    require_certified(g)?;
    let prod = product(f.domain(), g.domain())?;
    let left = prod.pi1.then(f)?;
    let right = prod.pi2.then(g)?;
    let eq = equalizer(&left, &right)?;
    let p1 = eq.iota.then(&prod.pi1)?;
    let p2 = eq.iota.then(&prod.pi2)?;
    let carrier = eq.carrier.iter().map(|&i| prod.pair(i)).collect();
    Ok(Pullback {
        space: eq.space.clone(),
        p1,
        p2,
        carrier,
        product: prod,
        equalizer: eq,
        f: f.clone(),
        g: g.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CosliceReport {
    /// `m ∘ f = h` pointwise.
    pub commutes: bool,
    /// All three legs passed their continuity check.
    pub all_continuous: bool,
}

/// Whether `m` is a morphism from `f` to `h` in the coslice under their common domain.
pub fn coslice_commute(
    f: &ContinuousMap,
    h: &ContinuousMap,
    m: &ContinuousMap,
) -> Result<CosliceReport> {
    if f.domain() != h.domain() || f.codomain() != m.domain() || m.codomain() != h.codomain() {
        return Err(TopoError::input(
            "coslice triangle legs do not fit together",
        ));
    }
    let commutes = (0..f.domain().n()).all(|x| m.apply(f.apply(x)) == h.apply(x));
    Ok(CosliceReport {
        commutes,
        all_continuous: f.certified && h.certified && m.certified,
    })
}
