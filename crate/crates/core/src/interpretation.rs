//! A finite Galois action model: a group acting on sorted finite sets, with
//! definable closure as fixed points of pointwise stabilizers. On top of it,
//! the conjugation / primitivity / pair machinery and the construction that
//! interprets the coset system purely in orbit terms, cross-checked against
//! the direct coset construction through an explicit sortwise bijection.
//!
//! Stabilizers are bitmasks over the acting group (order at most 64), which
//! keeps definable-closure questions to a few word operations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::complete_system::{CompleteSystem, SortKey};
use crate::duality::{group_system, DualityError};
use crate::groups::{FiniteGroup, NormalSubgroup};
use crate::report::{AxiomReport, CheckEntry, WitnessLog};
use crate::sorted_group::{SortedFiniteGroup, SortedGroupError};
use crate::sorts::{SortFamily, SortTerm, SortTuple, Support};

/// Default bound on generated tuple lengths.
pub const DEFAULT_TUPLE_BOUND: usize = 4;

const TUPLE_CAP: usize = 5_000_000;

#[derive(Debug, Error)]
pub enum InterpError {
    #[error("orbit action table is invalid: {0}")]
    BadAction(String),
    #[error("sort {0} is not realizable in this model")]
    Unrealizable(String),
    #[error("tuple sort of length {0} exceeds the bound {1}")]
    TupleTooLong(usize, usize),
    #[error("too many tuples to enumerate")]
    TooManyTuples,
    #[error("tuples must share one sort")]
    SortMismatch,
    #[error("model is not Galois-faithful: {0}")]
    NotFaithful(String),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    SortedGroup(#[from] SortedGroupError),
}

/// One orbit of the action, living in a base sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub sort: SortTerm,
    /// `action[g][p]` is the image of point `p` under group element `g`.
    pub action: Vec<Vec<usize>>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.action.first().map(|r| r.len()).unwrap_or(0)
    }
}

/// A point of the model: (orbit index, point index).
pub type Point = (usize, usize);

/// A pair `(a, b)` of same-sort tuples with `a` k-primitive and `b` in its
/// orbit; the finite stand-in for one automorphism germ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InterpretedPair {
    pub a: Vec<Point>,
    pub b: Vec<Point>,
    pub degree: usize,
}

/// The acting group together with its sorted orbits.
#[derive(Debug, Clone)]
pub struct GaloisActionModel {
    pub gamma: FiniteGroup,
    pub orbits: Vec<Orbit>,
}

impl GaloisActionModel {
    pub fn new(gamma: FiniteGroup, orbits: Vec<Orbit>) -> Result<Self, InterpError> {
        let model = GaloisActionModel { gamma, orbits };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<(), InterpError> {
        let n = self.gamma.order();
        if n > 64 {
            return Err(InterpError::BadAction("group too large for masks".into()));
        }
        for (oi, orbit) in self.orbits.iter().enumerate() {
            if orbit.action.len() != n {
                return Err(InterpError::BadAction(format!(
                    "orbit {oi} has {} action rows, group order is {n}",
                    orbit.action.len()
                )));
            }
            let m = orbit.size();
            for (g, row) in orbit.action.iter().enumerate() {
                if row.len() != m || row.iter().any(|&p| p >= m) {
                    return Err(InterpError::BadAction(format!(
                        "orbit {oi} row {g} malformed"
                    )));
                }
                let distinct: BTreeSet<usize> = row.iter().copied().collect();
                if distinct.len() != m {
                    return Err(InterpError::BadAction(format!(
                        "orbit {oi} row {g} is not a permutation"
                    )));
                }
            }
            for p in 0..m {
                if orbit.action[0][p] != p {
                    return Err(InterpError::BadAction(format!(
                        "identity moves point {p} of orbit {oi}"
                    )));
                }
            }
            for g in 0..n {
                for h in 0..n {
                    let gh = self.gamma.mul(g, h);
                    for p in 0..m {
                        if orbit.action[g][orbit.action[h][p]] != orbit.action[gh][p] {
                            return Err(InterpError::BadAction(format!(
                                "orbit {oi} is not a group action at ({g},{h},{p})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, g: usize, p: Point) -> Point {
        (p.0, self.orbits[p.0].action[g][p.1])
    }

    pub fn apply_tuple(&self, g: usize, t: &[Point]) -> Vec<Point> {
        t.iter().map(|&p| self.apply(g, p)).collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.orbits
            .iter()
            .enumerate()
            .flat_map(|(oi, o)| (0..o.size()).map(move |p| (oi, p)))
            .collect()
    }

    pub fn points_of_sort(&self, sort: &SortTerm) -> Vec<Point> {
        self.orbits
            .iter()
            .enumerate()
            .filter(|(_, o)| &o.sort == sort)
            .flat_map(|(oi, o)| (0..o.size()).map(move |p| (oi, p)))
            .collect()
    }

    pub fn base_sorts(&self) -> Vec<SortTerm> {
        let set: BTreeSet<SortTerm> = self.orbits.iter().map(|o| o.sort.clone()).collect();
        set.into_iter().collect()
    }

    fn full_mask(&self) -> u64 {
        if self.gamma.order() == 64 {
            u64::MAX
        } else {
            (1u64 << self.gamma.order()) - 1
        }
    }

    pub fn point_stab(&self, p: Point) -> u64 {
        let mut mask = 0u64;
        for g in 0..self.gamma.order() {
            if self.apply(g, p) == p {
                mask |= 1 << g;
            }
        }
        mask
    }

    pub fn stab_mask(&self, t: &[Point]) -> u64 {
        t.iter()
            .map(|&p| self.point_stab(p))
            .fold(self.full_mask(), |acc, m| acc & m)
    }

    pub fn orbit_size(&self, t: &[Point]) -> usize {
        self.gamma.order() / self.stab_mask(t).count_ones() as usize
    }

    fn mask_elements(&self, mask: u64) -> Vec<usize> {
        (0..self.gamma.order()).filter(|&g| mask >> g & 1 == 1).collect()
    }

    fn conjugate_mask(&self, g: usize, mask: u64) -> u64 {
        let gi = self.gamma.inv(g);
        let mut out = 0u64;
        for x in self.mask_elements(mask) {
            out |= 1 << self.gamma.mul(self.gamma.mul(g, x), gi);
        }
        out
    }

    /// Points fixed by every element of the given stabilizer mask.
    pub fn fix_of_mask(&self, mask: u64) -> Vec<Point> {
        self.points()
            .into_iter()
            .filter(|&p| self.point_stab(p) & mask == mask)
            .collect()
    }

    /// Definable closure: fixed points of the pointwise stabilizer.
    pub fn dcl(&self, a: &[Point]) -> Vec<Point> {
        self.fix_of_mask(self.stab_mask(a))
    }

    /// `b` lies in `dcl(a, K)` componentwise.
    pub fn in_dcl(&self, a: &[Point], b: &[Point]) -> bool {
        let sa = self.stab_mask(a);
        sa & self.stab_mask(b) == sa
    }

    /// The model is Galois-faithful when distinct normal subgroups have
    /// distinct fixed-point sets.
    pub fn check_galois_faithful(&self) -> Result<(), InterpError> {
        let normals = self.gamma.normal_subgroups();
        let mut seen: BTreeMap<Vec<Point>, usize> = BTreeMap::new();
        for (i, n) in normals.iter().enumerate() {
            let mask = n.elements().iter().fold(0u64, |m, &x| m | 1 << x);
            let fix = self.fix_of_mask(mask);
            if let Some(&j) = seen.get(&fix) {
                return Err(InterpError::NotFaithful(format!(
                    "normal subgroups {} and {} fix the same points",
                    normals[j], n
                )));
            }
            seen.insert(fix, i);
        }
        Ok(())
    }

    fn tuple_sort(&self, t: &[Point]) -> Vec<SortTerm> {
        t.iter().map(|&(oi, _)| self.orbits[oi].sort.clone()).collect()
    }

    /// The conjugation predicate: pairwise distinct tuples of one sort whose
    /// set is exactly one full orbit.
    pub fn conj(&self, tuples: &[Vec<Point>]) -> Result<bool, InterpError> {
        let Some(first) = tuples.first() else {
            return Ok(false);
        };
        let sort = self.tuple_sort(first);
        if tuples.iter().any(|t| self.tuple_sort(t) != sort) {
            return Err(InterpError::SortMismatch);
        }
        let listed: BTreeSet<&Vec<Point>> = tuples.iter().collect();
        if listed.len() != tuples.len() {
            return Ok(false); // repeats
        }
        let orbit: BTreeSet<Vec<Point>> = (0..self.gamma.order())
            .map(|g| self.apply_tuple(g, first))
            .collect();
        Ok(orbit.len() == tuples.len() && tuples.iter().all(|t| orbit.contains(t)))
    }

    /// `a` is n-primitive: its orbit has size `n` and the tuple enumerating
    /// that orbit again has orbit size `n`.
    pub fn is_n_primitive(&self, a: &[Point], n: usize) -> bool {
        let stab = self.stab_mask(a);
        if self.gamma.order() / stab.count_ones() as usize != n {
            return false;
        }
        // pointwise stabilizer of the whole orbit = orbit size of the
        // enumerating tuple
        let orbit_stab = (0..self.gamma.order())
            .map(|g| self.conjugate_mask(g, stab))
            .fold(self.full_mask(), |acc, m| acc & m);
        self.gamma.order() / orbit_stab.count_ones() as usize == n
    }

    /// All tuples of points in the given (base-sort) tuple sort.
    pub fn tuples_of(&self, j: &SortTuple, bound: usize) -> Result<Vec<Vec<Point>>, InterpError> {
        if j.len() > bound {
            return Err(InterpError::TupleTooLong(j.len(), bound));
        }
        let mut pools = vec![];
        for term in j.terms() {
            if matches!(term, SortTerm::SetCode { .. }) {
                return Err(InterpError::Unrealizable(term.to_string()));
            }
            pools.push(self.points_of_sort(term));
        }
        let total: usize = pools.iter().map(|p| p.len().max(1)).product();
        if total > TUPLE_CAP {
            return Err(InterpError::TooManyTuples);
        }
        let mut out: Vec<Vec<Point>> = vec![vec![]];
        for pool in &pools {
            let mut next = Vec::with_capacity(out.len() * pool.len());
            for t in &out {
                for &p in pool {
                    let mut t2 = t.clone();
                    t2.push(p);
                    next.push(t2);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// All pairs `(a, b)` with `a` k-primitive in sort `J` and `b` in the
    /// orbit of `a`.
    pub fn u_pairs(
        &self,
        k: usize,
        j: &SortTuple,
        bound: usize,
    ) -> Result<Vec<InterpretedPair>, InterpError> {
        let mut out = vec![];
        for a in self.tuples_of(j, bound)? {
            if !self.is_n_primitive(&a, k) {
                continue;
            }
            let images: BTreeSet<Vec<Point>> = (0..self.gamma.order())
                .map(|g| self.apply_tuple(g, &a))
                .collect();
            for b in images {
                out.push(InterpretedPair {
                    a: a.clone(),
                    b,
                    degree: k,
                });
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The equivalence identifying pairs that define the same automorphism:
    /// first components generate the same closure and one group element
    /// moves both first components onto both second components.
    pub fn approx(&self, p: &InterpretedPair, q: &InterpretedPair) -> bool {
        if p.degree != q.degree || p.a.len() != q.a.len() {
            return false;
        }
        let concat: Vec<Point> = p.a.iter().chain(q.a.iter()).copied().collect();
        if !self.is_n_primitive(&concat, p.degree) {
            return false;
        }
        (0..self.gamma.order()).any(|g| {
            self.apply_tuple(g, &p.a) == p.b && self.apply_tuple(g, &q.a) == q.b
        })
    }

    /// Order between pairs: degrees weakly decrease and the second first
    /// component is definable from the first.
    pub fn rel_leq(&self, p1: &InterpretedPair, p2: &InterpretedPair) -> bool {
        p1.degree >= p2.degree && self.in_dcl(&p1.a, &p2.a)
    }

    /// Compatibility: the concatenated pair is again a certified pair.
    pub fn rel_c(&self, p1: &InterpretedPair, p2: &InterpretedPair) -> bool {
        if p1.degree < p2.degree {
            return false;
        }
        let a: Vec<Point> = p1.a.iter().chain(p2.a.iter()).copied().collect();
        let b: Vec<Point> = p1.b.iter().chain(p2.b.iter()).copied().collect();
        if !self.is_n_primitive(&a, p1.degree) {
            return false;
        }
        (0..self.gamma.order()).any(|g| self.apply_tuple(g, &a) == b)
    }

    /// Composition: some `c` closes the two triangles, which encodes the
    /// product of the corresponding automorphisms.
    pub fn rel_p(
        &self,
        p1: &InterpretedPair,
        p2: &InterpretedPair,
        p3: &InterpretedPair,
    ) -> bool {
        if p1.degree != p2.degree || p1.degree != p3.degree {
            return false;
        }
        if !(self.in_dcl(&p1.a, &p2.a) && self.in_dcl(&p1.a, &p3.a)) {
            return false;
        }
        for g in 0..self.gamma.order() {
            if self.apply_tuple(g, &p1.a) != p1.b {
                continue;
            }
            let c = self.apply_tuple(g, &p2.b);
            let q1 = InterpretedPair {
                a: p2.b.clone(),
                b: c.clone(),
                degree: p1.degree,
            };
            let q2 = InterpretedPair {
                a: p2.a.clone(),
                b: c,
                degree: p1.degree,
            };
            if self.approx(p1, &q1) && self.approx(p3, &q2) {
                return true;
            }
        }
        false
    }
}

/// The orbit-interpreted system plus the data identifying each element.
#[derive(Debug)]
pub struct InterpretedSystem {
    pub system: CompleteSystem,
    /// Representative pair per element.
    pub reps: Vec<InterpretedPair>,
    /// (degree, stabilizer mask, least coset element) per element.
    pub keys: Vec<(usize, u64, usize)>,
}

/// Classes of `u_pairs` under `approx`, via the canonical invariant
/// (stabilizer mask, least group element moving `a` to `b`).
fn pair_classes(
    model: &GaloisActionModel,
    pairs: &[InterpretedPair],
) -> Vec<((u64, usize), InterpretedPair)> {
    let mut classes: BTreeMap<(u64, usize), InterpretedPair> = BTreeMap::new();
    for p in pairs {
        let stab = model.stab_mask(&p.a);
        let coset_min = (0..model.gamma.order())
            .find(|&g| model.apply_tuple(g, &p.a) == p.b)
            .expect("b lies in the orbit of a");
        let key = (stab, coset_min);
        classes
            .entry(key)
            .and_modify(|rep| {
                if (&p.a, &p.b) < (&rep.a, &rep.b) {
                    *rep = p.clone();
                }
            })
            .or_insert_with(|| p.clone());
    }
    classes.into_iter().collect()
}

/// Builds the system carried by the pair classes: sort `m(k,J)` collects the
/// classes of every degree `i <= k` over the i-fold concatenation of `J`,
/// with relations evaluated on representatives through the pair predicates.
pub fn interpret_system(
    model: &GaloisActionModel,
    support: &[SortKey],
    bound: usize,
) -> Result<InterpretedSystem, InterpError> {
    let sorts: Vec<SortKey> = {
        let set: BTreeSet<SortKey> = support.iter().cloned().collect();
        set.into_iter().collect()
    };
    type ClassList = Vec<((u64, usize), InterpretedPair)>;
    let mut cache: HashMap<(usize, SortTuple), ClassList> = HashMap::new();
    let mut elements = vec![];
    let mut reps = vec![];
    let mut keys = vec![];
    for (si, key) in sorts.iter().enumerate() {
        for i in 1..=key.k {
            let mut jj = key.tuple.clone();
            for _ in 1..i {
                jj = crate::sorts::j_star_cap(&jj, &key.tuple);
            }
            let classes = match cache.entry((i, jj.clone())) {
                std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::hash_map::Entry::Vacant(v) => {
                    let pairs = model.u_pairs(i, &jj, bound)?;
                    v.insert(pair_classes(model, &pairs))
                }
            };
            for ((stab, coset_min), rep) in classes.iter() {
                let subgroup = model.mask_elements(*stab);
                elements.push((
                    si,
                    format!("U{i}N{subgroup:?}g{coset_min}@{key}"),
                ));
                reps.push(rep.clone());
                keys.push((i, *stab, *coset_min));
            }
        }
    }
    let n = elements.len() as u32;
    let mut leq = vec![];
    let mut c = vec![];
    for x in 0..n {
        for y in 0..n {
            if model.rel_leq(&reps[x as usize], &reps[y as usize]) {
                leq.push((x, y));
            }
            if model.rel_c(&reps[x as usize], &reps[y as usize]) {
                c.push((x, y));
            }
        }
    }
    let elem_sorts: Vec<usize> = elements.iter().map(|(s, _)| *s).collect();
    let mut p = vec![];
    for x in 0..n {
        for y in 0..n {
            if elem_sorts[x as usize] != elem_sorts[y as usize] {
                continue;
            }
            for z in 0..n {
                if elem_sorts[z as usize] != elem_sorts[x as usize] {
                    continue;
                }
                if model.rel_p(&reps[x as usize], &reps[y as usize], &reps[z as usize]) {
                    p.push((x, y, z));
                }
            }
        }
    }
    let system = CompleteSystem::new(sorts, elements, leq, c, p)
        .map_err(|e| InterpError::BadAction(e.to_string()))?;
    Ok(InterpretedSystem { system, reps, keys })
}

/// The sorted group the model induces: the acting group, with each normal
/// subgroup's family generated by the base-sort supports over which a
/// primitive tuple with that exact stabilizer exists.
pub fn derived_sorted_group(
    model: &GaloisActionModel,
    bound: usize,
) -> Result<SortedFiniteGroup, InterpError> {
    let normals = model.gamma.normal_subgroups();
    let base = model.base_sorts();
    let mut families = vec![];
    for n in &normals {
        let n_mask = n.elements().iter().fold(0u64, |m, &x| m | 1 << x);
        let mut gens: Vec<Support> = vec![];
        // subsets of base sorts, smallest first so the antichain stays tight
        let subsets: Vec<Vec<&SortTerm>> = {
            let mut all: Vec<Vec<&SortTerm>> = (1u32..(1 << base.len()))
                .map(|mask| {
                    base.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, t)| t)
                        .collect()
                })
                .collect();
            all.sort_by_key(|s| s.len());
            all
        };
        for subset in subsets {
            if subset.len() > bound {
                continue;
            }
            if achievable_stab(model, &subset, n_mask, bound) {
                let sup = Support::from_terms(subset.into_iter().cloned());
                if !gens.iter().any(|g| g.is_subset(&sup)) {
                    gens.push(sup);
                }
            }
        }
        families.push(SortFamily::from_generators(gens).expect("supports are nonempty"));
    }
    Ok(SortedFiniteGroup::new(model.gamma.clone(), families)?)
}

/// Is there a tuple of at most `bound` points, covering exactly the given
/// base sorts, whose pointwise stabilizer is exactly `target`?
fn achievable_stab(
    model: &GaloisActionModel,
    cover: &[&SortTerm],
    target: u64,
    bound: usize,
) -> bool {
    // states: (stab mask so far, covered sorts bitmask)
    let pools: Vec<Vec<u64>> = cover
        .iter()
        .map(|t| {
            model
                .points_of_sort(t)
                .into_iter()
                .map(|p| model.point_stab(p))
                .collect()
        })
        .collect();
    if pools.iter().any(|p| p.is_empty()) {
        return false;
    }
    let full_cover = (1u32 << cover.len()) - 1;
    let mut states: BTreeSet<(u64, u32)> = BTreeSet::new();
    states.insert((model_full(model), 0));
    for _ in 0..bound {
        let mut next = states.clone();
        for &(mask, covered) in &states {
            for (si, pool) in pools.iter().enumerate() {
                for &pm in pool {
                    next.insert((mask & pm, covered | 1 << si));
                }
            }
        }
        if next == states {
            break;
        }
        states = next;
    }
    states.contains(&(target, full_cover))
}

fn model_full(model: &GaloisActionModel) -> u64 {
    if model.gamma.order() == 64 {
        u64::MAX
    } else {
        (1u64 << model.gamma.order()) - 1
    }
}

/// Compares the orbit-interpreted system with the coset system of the
/// derived sorted group through the canonical coset-to-pair bijection.
pub fn check_interpretation(
    model: &GaloisActionModel,
    support: &[SortKey],
    bound: usize,
) -> AxiomReport {
    let mut report = AxiomReport::new();
    if let Err(e) = model.validate() {
        report.push(CheckEntry::fail("action-valid", 1, 0, vec![e.to_string()]));
        return report;
    }
    report.push(CheckEntry::pass("action-valid", 1, 0));
    if let Err(e) = model.check_galois_faithful() {
        report.push(CheckEntry::fail(
            "galois-faithful",
            1,
            0,
            vec![e.to_string()],
        ));
        return report;
    }
    report.push(CheckEntry::pass("galois-faithful", 1, 0));

    let derived = match derived_sorted_group(model, bound) {
        Ok(sg) => sg.saturate_sorting(),
        Err(e) => {
            report.push(CheckEntry::fail("derived-group", 1, 0, vec![e.to_string()]));
            return report;
        }
    };
    let gs = match group_system(&derived, support) {
        Ok(gs) => gs,
        Err(e) => {
            report.push(CheckEntry::fail("coset-system", 1, 0, vec![e.to_string()]));
            return report;
        }
    };
    let interp = match interpret_system(model, support, bound) {
        Ok(i) => i,
        Err(e) => {
            report.push(CheckEntry::fail(
                "interpreted-system",
                1,
                0,
                vec![e.to_string()],
            ));
            return report;
        }
    };

    // the canonical bijection: coset gH in sort (k,J) goes to the pair class
    // keyed by (index of H, mask of H, least element of gH)
    let mut key_lookup: HashMap<(usize, usize, u64, usize), u32> = HashMap::new();
    for e in 0..interp.system.len() as u32 {
        let (i, stab, coset_min) = interp.keys[e as usize];
        key_lookup.insert((interp.system.sort_of(e), i, stab, coset_min), e);
    }
    let mut log = WitnessLog::new(5);
    let mut f_map: Vec<Option<u32>> = vec![];
    for e in 0..gs.system.len() as u32 {
        let (ni, rep) = gs.cosets[e as usize];
        let h = &gs.subgroups[ni];
        let mask = h.elements().iter().fold(0u64, |m, &x| m | 1 << x);
        let coset_min = (0..model.gamma.order())
            .filter(|&g| model.gamma.coset_rep(h, g) == rep)
            .min()
            .unwrap();
        let sort_idx = gs.system.sort_of(e);
        // sort keys agree between the two systems by construction
        let target = key_lookup
            .get(&(sort_idx, h.index(), mask, coset_min))
            .copied();
        if target.is_none() {
            log.record(format!("no pair class for {}", gs.system.label(e)));
        }
        f_map.push(target);
    }
    let mut image: BTreeSet<u32> = BTreeSet::new();
    for t in f_map.iter().flatten() {
        image.insert(*t);
    }
    if gs.system.len() != interp.system.len() || image.len() != interp.system.len() {
        log.record(format!(
            "coset system has {} elements, interpreted system {} (image {})",
            gs.system.len(),
            interp.system.len(),
            image.len()
        ));
    }
    let bijective = log.is_empty();
    report.finish("interpretation-bijection", gs.system.len(), 0, log);
    if !bijective {
        return report;
    }
    let map: Vec<u32> = f_map.into_iter().map(|t| t.unwrap()).collect();
    let mut log = WitnessLog::new(5);
    if let Err(e) = crate::duality::verify_embedding(&gs.system, &interp.system, &map) {
        log.record(e);
    }
    report.finish(
        "interpretation-relations",
        gs.system.len() * gs.system.len(),
        0,
        log,
    );
    report
}

/// The `dcl` versus primitivity equivalence, exhaustively over primitive
/// tuples up to the length bound and every single point.
pub fn dcl_iff_primitive(model: &GaloisActionModel, bound: usize) -> AxiomReport {
    let mut report = AxiomReport::new();
    let mut log = WitnessLog::new(5);
    let mut checked = 0usize;
    let base = model.base_sorts();
    let mut tuples: Vec<Vec<Point>> = vec![vec![]];
    for _len in 1..bound.max(1) {
        let mut grew = vec![];
        for t in &tuples {
            for s in &base {
                for p in model.points_of_sort(s) {
                    let mut t2 = t.clone();
                    t2.push(p);
                    grew.push(t2);
                }
            }
        }
        for a in &grew {
            let n = model.orbit_size(a);
            if !model.is_n_primitive(a, n) {
                continue;
            }
            for b in model.points() {
                checked += 1;
                let lhs = model.in_dcl(a, &[b]);
                let mut ab = a.clone();
                ab.push(b);
                let rhs = model.is_n_primitive(&ab, n);
                if lhs != rhs {
                    log.record(format!(
                        "dcl and primitivity disagree on {a:?} with {b:?}"
                    ));
                }
            }
        }
        tuples = grew;
    }
    report.finish("dcl-iff-primitive", checked, 0, log);
    report
}

/// The uniqueness remark: a pair's second component is determined by its
/// first, exhaustively over one pair set.
pub fn check_unique_approx(
    model: &GaloisActionModel,
    k: usize,
    j: &SortTuple,
    bound: usize,
) -> Result<AxiomReport, InterpError> {
    let pairs = model.u_pairs(k, j, bound)?;
    let mut by_first: BTreeMap<&Vec<Point>, Vec<&InterpretedPair>> = BTreeMap::new();
    for p in &pairs {
        by_first.entry(&p.a).or_default().push(p);
    }
    let mut report = AxiomReport::new();
    let mut log = WitnessLog::new(5);
    let mut checked = 0;
    for (_, group) in by_first {
        for (i, p) in group.iter().enumerate() {
            for q in group.iter().skip(i + 1) {
                checked += 1;
                if p.b != q.b && model.approx(p, q) {
                    log.record(format!("approx identifies {:?} with {:?}", p.b, q.b));
                }
            }
        }
    }
    report.finish("unique-approx", checked, 0, log);
    Ok(report)
}

/// The canonical Galois-faithful model of a sorted group: one orbit of
/// cosets per normal subgroup, each placed in a base sort its family names.
pub fn regular_model(sg: &SortedFiniteGroup) -> GaloisActionModel {
    let g = sg.group();
    let mut orbits = vec![];
    for (ni, n) in sg.subgroups().iter().enumerate() {
        let sort = sg
            .family(ni)
            .generators()
            .iter()
            .flat_map(|s| s.terms())
            .find(|t| matches!(t, SortTerm::Base(_)))
            .cloned()
            .unwrap_or_else(|| SortTerm::base("A"));
        let cosets = g.cosets(n);
        let rep_index: HashMap<usize, usize> = cosets
            .iter()
            .enumerate()
            .map(|(i, c)| (c[0], i))
            .collect();
        let action: Vec<Vec<usize>> = (0..g.order())
            .map(|gamma| {
                cosets
                    .iter()
                    .map(|c| rep_index[&g.coset_rep(n, g.mul(gamma, c[0]))])
                    .collect()
            })
            .collect();
        orbits.push(Orbit { sort, action });
    }
    GaloisActionModel {
        gamma: g.clone(),
        orbits,
    }
}

/// Subgroup of the acting group as a mask-backed normal subgroup, for tests.
pub fn normal_mask(g: &FiniteGroup, n: &NormalSubgroup) -> u64 {
    let _ = g;
    n.elements().iter().fold(0u64, |m, &x| m | 1 << x)
}
