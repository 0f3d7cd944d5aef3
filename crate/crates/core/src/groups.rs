//! Finite groups as Cayley tables, with the subgroup machinery the rest of
//! the crate runs on: normal subgroup enumeration, quotients, epimorphisms,
//! meets and joins, and the triple fiber product.
//!
//! Element 0 is always the identity and coset representatives are minimal
//! indices, so every derived object has one canonical form.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{AxiomReport, WitnessLog};

/// Exhaustive enumeration keeps everything tractable only at small orders.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("cayley table must be square and nonempty (got {0} rows)")]
    BadDimensions(usize),
    #[error("cayley entry out of range at ({0},{1})")]
    EntryOutOfRange(usize, usize),
    #[error("group order {0} exceeds the supported cap {MAX_ORDER}")]
    TooLarge(usize),
    #[error("element 0 is not an identity")]
    NoIdentityAtZero,
    #[error("table does not satisfy the group laws: {0}")]
    NotAGroup(String),
    #[error("subgroup is not normal in its parent")]
    NotNormal,
    #[error("subgroup elements do not form a subgroup")]
    NotASubgroup,
    #[error("subgroup does not belong to this group")]
    ParentMismatch,
    #[error("map images out of range or wrong length")]
    BadMap,
    #[error("map is not a homomorphism at ({0},{1})")]
    NotHomomorphism(usize, usize),
    #[error("map is not surjective")]
    NotEpimorphism,
    #[error("fiber product inputs disagree: {0}")]
    FiberMismatch(String),
}

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Builds from a table, checking dimensions, ranges and the group laws.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(GroupError::BadDimensions(n));
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::EntryOutOfRange(i, j));
                }
            }
        }
        let g = FiniteGroup { table };
        let report = g.validate();
        if !report.passed() {
            let first = report
                .entries
                .iter()
                .find(|e| e.status != crate::report::CheckStatus::Pass)
                .map(|e| format!("{}: {}", e.name, e.witnesses.join(", ")))
                .unwrap_or_default();
            if report.status("identity") != Some(crate::report::CheckStatus::Pass) {
                return Err(GroupError::NoIdentityAtZero);
            }
            return Err(GroupError::NotAGroup(first));
        }
        Ok(g)
    }

    /// Structural wrap without law checks, for tables built internally.
    fn from_table_unchecked(table: Vec<Vec<usize>>) -> Self {
        FiniteGroup { table }
    }

    /// Law checks with witnesses; usable on candidate tables as well as on
    /// constructed groups.
    #[allow(clippy::needless_range_loop)]
    pub fn validate_table(table: &[Vec<usize>]) -> AxiomReport {
        let mut report = AxiomReport::new();
        let n = table.len();
        let square = n > 0 && table.iter().all(|r| r.len() == n);
        let in_range = square
            && table
                .iter()
                .all(|r| r.iter().all(|&v| v < n));
        if !square || !in_range {
            report.push(crate::report::CheckEntry::fail(
                "shape",
                1,
                0,
                vec!["table not square or entry out of range".into()],
            ));
            return report;
        }
        report.push(crate::report::CheckEntry::pass("shape", 1, 0));

        let mut log = WitnessLog::new(3);
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                log.record(format!("0*{x} or {x}*0 differs from {x}"));
            }
        }
        report.finish("identity", n, 0, log);

        let mut log = WitnessLog::new(3);
        for x in 0..n {
            if !(0..n).any(|y| table[x][y] == 0 && table[y][x] == 0) {
                log.record(format!("{x} has no inverse"));
            }
        }
        report.finish("inverses", n, 0, log);

        let mut log = WitnessLog::new(3);
        'assoc: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        log.record(format!("associativity breaks at ({x},{y},{z})"));
                        break 'assoc;
                    }
                }
            }
        }
        report.finish("associativity", n * n * n, 0, log);

        // each row and column is a permutation
        let mut log = WitnessLog::new(3);
        for x in 0..n {
            let row: HashSet<_> = table[x].iter().collect();
            let col: HashSet<_> = (0..n).map(|y| table[y][x]).collect();
            if row.len() != n || col.len() != n {
                log.record(format!("row or column {x} is not a permutation"));
            }
        }
        report.finish("cancellation", n, 0, log);
        report
    }

    pub fn validate(&self) -> AxiomReport {
        FiniteGroup::validate_table(&self.table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mul(a, b) == 0).unwrap()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Cyclic group of order `n`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!((1..=MAX_ORDER).contains(&n));
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        FiniteGroup::from_table_unchecked(table)
    }

    /// Direct product with index pairing `(i, j) -> i * |b| + j`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let n = a.order() * b.order();
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let nb = b.order();
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (x1, x2) = (x / nb, x % nb);
                        let (y1, y2) = (y / nb, y % nb);
                        a.mul(x1, y1) * nb + b.mul(x2, y2)
                    })
                    .collect()
            })
            .collect();
        Ok(FiniteGroup::from_table_unchecked(table))
    }

    /// Symmetric group on three letters; permutations numbered in
    /// lexicographic order so the identity sits at 0.
    pub fn symmetric_3() -> FiniteGroup {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let compose = |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] {
            // (p*q)(x) = p(q(x))
            [p[q[0]], p[q[1]], p[q[2]]]
        };
        let index = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index(&compose(p, q))).collect())
            .collect();
        FiniteGroup::from_table_unchecked(table)
    }

    /// Dihedral group of order 8: elements `r^i s^j` numbered `i + 4j`.
    pub fn dihedral_4() -> FiniteGroup {
        let n = 8;
        let idx = |r: usize, s: usize| (r % 4) + 4 * (s % 2);
        let mut table = vec![vec![0; n]; n];
        for r1 in 0..4 {
            for s1 in 0..2 {
                for r2 in 0..4 {
                    for s2 in 0..2 {
                        // (r^a s^b)(r^c s^d) = r^(a + c*(-1)^b) s^(b+d)
                        let r = if s1 == 0 { (r1 + r2) % 4 } else { (r1 + 4 - r2 % 4) % 4 };
                        table[idx(r1, s1)][idx(r2, s2)] = idx(r, (s1 + s2) % 2);
                    }
                }
            }
        }
        FiniteGroup::from_table_unchecked(table)
    }

    /// Quaternion group: 1, i, -1, -i, j, k, -j, -k numbered 0..8.
    pub fn quaternion_8() -> FiniteGroup {
        // represent elements as pairs (a, b) with x = i^a j^b, a in 0..4, b in 0..2
        // relations: i^4 = 1, j^2 = i^2, j i = i^3 j
        let idx = |a: usize, b: usize| (a % 4) + 4 * (b % 2);
        let mut table = vec![vec![0; 8]; 8];
        for a1 in 0..4 {
            for b1 in 0..2 {
                for a2 in 0..4 {
                    for b2 in 0..2 {
                        // (i^a1 j^b1)(i^a2 j^b2): move j^b1 across i^a2
                        let (a_mid, b_mid) = if b1 == 0 {
                            (a1 + a2, b2)
                        } else {
                            // j i^a2 = i^(4 - a2) j
                            (a1 + (4 - a2 % 4) % 4, 1 + b2)
                        };
                        // j^2 = i^2
                        let extra = if b_mid >= 2 { 2 } else { 0 };
                        table[idx(a1, b1)][idx(a2, b2)] = idx(a_mid + extra, b_mid % 2);
                    }
                }
            }
        }
        FiniteGroup::from_table_unchecked(table)
    }

    /// All subgroups, produced by closing generator sets; deterministic order
    /// by (size, element list).
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(vec![0]);
        let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
        while let Some(h) = frontier.pop() {
            for g in 1..n {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let closed = self.closure(&gens);
                if found.insert(closed.clone()) {
                    frontier.push(closed);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by_key(|h| (h.len(), h.clone()));
        out
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = gens.iter().copied().collect();
        set.insert(0);
        loop {
            let mut grew = false;
            let elems: Vec<usize> = set.iter().copied().collect();
            for &a in &elems {
                for &b in &elems {
                    if set.insert(self.mul(a, b)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        set.into_iter().collect()
    }

    fn is_normal_set(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        (0..self.order()).all(|g| {
            let gi = self.inv(g);
            h.iter().all(|&x| set.contains(&self.mul(self.mul(g, x), gi)))
        })
    }

    /// All normal subgroups, ordered by (size, sorted element list).
    pub fn normal_subgroups(&self) -> Vec<NormalSubgroup> {
        self.subgroups()
            .into_iter()
            .filter(|h| self.is_normal_set(h))
            .map(|elements| NormalSubgroup {
                parent_order: self.order(),
                elements,
            })
            .collect()
    }

    /// Checks and wraps a candidate normal subgroup.
    pub fn normal_subgroup(&self, elements: &[usize]) -> Result<NormalSubgroup, GroupError> {
        let mut elements: Vec<usize> = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&x| x >= self.order()) {
            return Err(GroupError::ParentMismatch);
        }
        if !elements.contains(&0) {
            return Err(GroupError::NotASubgroup);
        }
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        let closed = elements.iter().all(|&a| {
            elements
                .iter()
                .all(|&b| set.contains(&self.mul(a, b)))
        }) && elements.iter().all(|&a| set.contains(&self.inv(a)));
        if !closed {
            return Err(GroupError::NotASubgroup);
        }
        if !self.is_normal_set(&elements) {
            return Err(GroupError::NotNormal);
        }
        Ok(NormalSubgroup {
            parent_order: self.order(),
            elements,
        })
    }

    /// Quotient by a normal subgroup with representative-minimal coset order,
    /// plus the natural epimorphism.
    pub fn quotient(&self, n: &NormalSubgroup) -> Result<(FiniteGroup, GroupMap), GroupError> {
        if n.parent_order != self.order() {
            return Err(GroupError::ParentMismatch);
        }
        let cosets = self.cosets(n);
        let coset_of: Vec<usize> = {
            let mut v = vec![0; self.order()];
            for (i, c) in cosets.iter().enumerate() {
                for &x in c {
                    v[x] = i;
                }
            }
            v
        };
        let q = cosets.len();
        let table: Vec<Vec<usize>> = (0..q)
            .map(|i| {
                (0..q)
                    .map(|j| coset_of[self.mul(cosets[i][0], cosets[j][0])])
                    .collect()
            })
            .collect();
        let qg = FiniteGroup::from_table_unchecked(table);
        let map = GroupMap::new(self.clone(), qg.clone(), coset_of)?;
        Ok((qg, map))
    }

    /// Left cosets of a normal subgroup ordered by minimal representative;
    /// the identity coset comes first.
    pub fn cosets(&self, n: &NormalSubgroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![];
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = n.elements.iter().map(|&x| self.mul(g, x)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            out.push(coset);
        }
        out
    }

    /// Representative-minimal name of the coset `g N`.
    pub fn coset_rep(&self, n: &NormalSubgroup, g: usize) -> usize {
        n.elements.iter().map(|&x| self.mul(g, x)).min().unwrap()
    }

    /// (N1 meet N2, N1 join N2) inside the normal subgroup lattice.
    pub fn meet_join(
        &self,
        n1: &NormalSubgroup,
        n2: &NormalSubgroup,
    ) -> Result<(NormalSubgroup, NormalSubgroup), GroupError> {
        if n1.parent_order != self.order() || n2.parent_order != self.order() {
            return Err(GroupError::ParentMismatch);
        }
        let s2: BTreeSet<usize> = n2.elements.iter().copied().collect();
        let meet: Vec<usize> = n1
            .elements
            .iter()
            .copied()
            .filter(|x| s2.contains(x))
            .collect();
        let mut join: BTreeSet<usize> = BTreeSet::new();
        for &a in &n1.elements {
            for &b in &n2.elements {
                join.insert(self.mul(a, b));
            }
        }
        Ok((
            NormalSubgroup {
                parent_order: self.order(),
                elements: meet,
            },
            NormalSubgroup {
                parent_order: self.order(),
                elements: join.into_iter().collect(),
            },
        ))
    }

    /// Exhaustive isomorphism test; intended for the small orders the corpus
    /// uses. Backtracks over generator images with order-profile pruning.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let n = self.order();
        let mut self_orders: Vec<usize> = (0..n).map(|x| self.element_order(x)).collect();
        let mut other_orders: Vec<usize> = (0..n).map(|x| other.element_order(x)).collect();
        let orders = (self_orders.clone(), other_orders.clone());
        self_orders.sort_unstable();
        other_orders.sort_unstable();
        if self_orders != other_orders {
            return false;
        }
        // choose a small generating sequence of self
        let mut gens: Vec<usize> = vec![];
        let mut span = vec![0usize];
        while span.len() < n {
            let g = (0..n).find(|x| !span.contains(x)).unwrap();
            gens.push(g);
            let mut with: Vec<usize> = span.clone();
            with.push(g);
            span = self.closure(&with);
        }
        let mut images = vec![usize::MAX; gens.len()];
        self.search_iso(other, &orders, &gens, &mut images, 0)
    }

    fn search_iso(
        &self,
        other: &FiniteGroup,
        orders: &(Vec<usize>, Vec<usize>),
        gens: &[usize],
        images: &mut Vec<usize>,
        depth: usize,
    ) -> bool {
        if depth == gens.len() {
            return self.check_iso_from_gens(other, gens, images);
        }
        for cand in 0..other.order() {
            if orders.0[gens[depth]] != orders.1[cand] {
                continue;
            }
            images[depth] = cand;
            if self.search_iso(other, orders, gens, images, depth + 1) {
                return true;
            }
        }
        images[depth] = usize::MAX;
        false
    }

    fn check_iso_from_gens(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &[usize],
    ) -> bool {
        // grow the word map from the generators and verify it is a bijective
        // homomorphism
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for (i, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                let fy = other.mul(map[x], images[i]);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    frontier.push(y);
                } else if map[y] != fy {
                    return false;
                }
            }
        }
        if map.contains(&usize::MAX) {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in &map {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        (0..n).all(|a| (0..n).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order())
    }
}

/// A normal subgroup, stored as a sorted element list plus the parent order
/// for sanity checks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalSubgroup {
    parent_order: usize,
    elements: Vec<usize>,
}

impl NormalSubgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &NormalSubgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

impl fmt::Display for NormalSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// A homomorphism between explicit finite groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMap {
    source: FiniteGroup,
    target: FiniteGroup,
    images: Vec<usize>,
}

impl GroupMap {
    pub fn new(
        source: FiniteGroup,
        target: FiniteGroup,
        images: Vec<usize>,
    ) -> Result<Self, GroupError> {
        if images.len() != source.order() || images.iter().any(|&v| v >= target.order()) {
            return Err(GroupError::BadMap);
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(GroupError::NotHomomorphism(a, b));
                }
            }
        }
        Ok(GroupMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: &FiniteGroup) -> GroupMap {
        GroupMap {
            source: g.clone(),
            target: g.clone(),
            images: (0..g.order()).collect(),
        }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_epimorphism(&self) -> bool {
        let seen: HashSet<usize> = self.images.iter().copied().collect();
        seen.len() == self.target.order()
    }

    pub fn kernel(&self) -> NormalSubgroup {
        let elements: Vec<usize> = (0..self.source.order())
            .filter(|&x| self.images[x] == 0)
            .collect();
        NormalSubgroup {
            parent_order: self.source.order(),
            elements,
        }
    }

    /// Preimage of a normal subgroup of the target.
    pub fn preimage(&self, n: &NormalSubgroup) -> Result<NormalSubgroup, GroupError> {
        if n.parent_order != self.target.order() {
            return Err(GroupError::ParentMismatch);
        }
        let elements: Vec<usize> = (0..self.source.order())
            .filter(|&x| n.contains(self.images[x]))
            .collect();
        Ok(NormalSubgroup {
            parent_order: self.source.order(),
            elements,
        })
    }

    /// Composition `other . self` (apply `self` first).
    pub fn then(&self, other: &GroupMap) -> Result<GroupMap, GroupError> {
        if self.target != other.source {
            return Err(GroupError::ParentMismatch);
        }
        let images = self.images.iter().map(|&x| other.images[x]).collect();
        GroupMap::new(self.source.clone(), other.target.clone(), images)
    }
}

/// The fiber product of the lemma on triples of restrictions: all triples
/// from `G_AB x G_AC x G_BC` whose restrictions agree pairwise. The ambient
/// direct product is kept implicit (componentwise operations); for small
/// orders `as_group` materializes the subgroup itself.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub g_ab: FiniteGroup,
    pub g_ac: FiniteGroup,
    pub g_bc: FiniteGroup,
    /// Member triples, sorted; the identity triple comes first when present.
    pub triples: Vec<(usize, usize, usize)>,
}

#[allow(clippy::too_many_arguments)]
pub fn fiber_triple(
    p_ab_a: &GroupMap,
    p_ab_b: &GroupMap,
    p_ac_a: &GroupMap,
    p_ac_c: &GroupMap,
    p_bc_b: &GroupMap,
    p_bc_c: &GroupMap,
) -> Result<FiberProduct, GroupError> {
    for (name, m) in [
        ("ab->a", p_ab_a),
        ("ab->b", p_ab_b),
        ("ac->a", p_ac_a),
        ("ac->c", p_ac_c),
        ("bc->b", p_bc_b),
        ("bc->c", p_bc_c),
    ] {
        if !m.is_epimorphism() {
            return Err(GroupError::FiberMismatch(format!("{name} is not onto")));
        }
    }
    if p_ab_a.source() != p_ab_b.source() {
        return Err(GroupError::FiberMismatch("sources of AB maps differ".into()));
    }
    if p_ac_a.source() != p_ac_c.source() {
        return Err(GroupError::FiberMismatch("sources of AC maps differ".into()));
    }
    if p_bc_b.source() != p_bc_c.source() {
        return Err(GroupError::FiberMismatch("sources of BC maps differ".into()));
    }
    if p_ab_a.target() != p_ac_a.target() {
        return Err(GroupError::FiberMismatch("targets over A differ".into()));
    }
    if p_ab_b.target() != p_bc_b.target() {
        return Err(GroupError::FiberMismatch("targets over B differ".into()));
    }
    if p_ac_c.target() != p_bc_c.target() {
        return Err(GroupError::FiberMismatch("targets over C differ".into()));
    }
    let g_ab = p_ab_a.source();
    let g_ac = p_ac_a.source();
    let g_bc = p_bc_b.source();
    let mut triples = vec![];
    for s1 in 0..g_ab.order() {
        for s2 in 0..g_ac.order() {
            if p_ab_a.apply(s1) != p_ac_a.apply(s2) {
                continue;
            }
            for s3 in 0..g_bc.order() {
                if p_ab_b.apply(s1) == p_bc_b.apply(s3) && p_ac_c.apply(s2) == p_bc_c.apply(s3) {
                    triples.push((s1, s2, s3));
                }
            }
        }
    }
    Ok(FiberProduct {
        g_ab: g_ab.clone(),
        g_ac: g_ac.clone(),
        g_bc: g_bc.clone(),
        triples,
    })
}

impl FiberProduct {
    pub fn order(&self) -> usize {
        self.triples.len()
    }

    pub fn mul(
        &self,
        a: (usize, usize, usize),
        b: (usize, usize, usize),
    ) -> (usize, usize, usize) {
        (
            self.g_ab.mul(a.0, b.0),
            self.g_ac.mul(a.1, b.1),
            self.g_bc.mul(a.2, b.2),
        )
    }

    pub fn inv(&self, a: (usize, usize, usize)) -> (usize, usize, usize) {
        (self.g_ab.inv(a.0), self.g_ac.inv(a.1), self.g_bc.inv(a.2))
    }

    /// Closure of the member set under componentwise product and inverse.
    pub fn is_subgroup(&self) -> bool {
        let set: BTreeSet<(usize, usize, usize)> = self.triples.iter().copied().collect();
        if !set.contains(&(0, 0, 0)) {
            return false;
        }
        self.triples.iter().all(|&a| {
            set.contains(&self.inv(a)) && self.triples.iter().all(|&b| set.contains(&self.mul(a, b)))
        })
    }

    /// The fiber product as a standalone group when small enough; member 0
    /// is the identity triple because triples are sorted.
    pub fn as_group(&self) -> Result<FiniteGroup, GroupError> {
        let n = self.triples.len();
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let index = |t: (usize, usize, usize)| {
            self.triples
                .binary_search(&t)
                .map_err(|_| GroupError::NotASubgroup)
        };
        let mut table = vec![vec![0usize; n]; n];
        for (i, &a) in self.triples.iter().enumerate() {
            for (j, &b) in self.triples.iter().enumerate() {
                table[i][j] = index(self.mul(a, b))?;
            }
        }
        FiniteGroup::from_table(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force subgroup oracle: filter all subsets. Usable up to order 8.
    fn subgroup_oracle(g: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = g.order();
        assert!(n <= 8);
        let mut out = vec![];
        for mask in 1u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let elems: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let set: BTreeSet<usize> = elems.iter().copied().collect();
            let closed = elems.iter().all(|&a| {
                set.contains(&g.inv(a)) && elems.iter().all(|&b| set.contains(&g.mul(a, b)))
            });
            if closed {
                out.push(elems);
            }
        }
        out.sort_by_key(|h| (h.len(), h.clone()));
        out
    }

    fn normal_oracle(g: &FiniteGroup) -> Vec<Vec<usize>> {
        subgroup_oracle(g)
            .into_iter()
            .filter(|h| {
                let set: BTreeSet<usize> = h.iter().copied().collect();
                (0..g.order()).all(|x| {
                    h.iter()
                        .all(|&a| set.contains(&g.mul(g.mul(x, a), g.inv(x))))
                })
            })
            .collect()
    }

    #[test]
    fn validate_passes_on_cyclic_and_trivial() {
        assert!(FiniteGroup::cyclic(4).validate().passed());
        assert!(FiniteGroup::cyclic(1).validate().passed());
    }

    #[test]
    fn validate_flags_broken_associativity() {
        let mut table = FiniteGroup::cyclic(4).table().to_vec();
        table[1][1] = 3; // break 1*1 = 2
        let report = FiniteGroup::validate_table(&table);
        assert!(!report.passed());
        let assoc = report.entry("associativity").unwrap();
        assert!(assoc
            .witnesses
            .iter()
            .any(|w| w.contains("associativity breaks at")));
        assert!(FiniteGroup::from_table(table).is_err());
    }

    #[test]
    fn normal_subgroups_match_oracle() {
        for g in [
            FiniteGroup::cyclic(4),
            FiniteGroup::cyclic(6),
            FiniteGroup::symmetric_3(),
            FiniteGroup::dihedral_4(),
            FiniteGroup::quaternion_8(),
        ] {
            let got: Vec<Vec<usize>> = g
                .normal_subgroups()
                .iter()
                .map(|n| n.elements().to_vec())
                .collect();
            assert_eq!(got, normal_oracle(&g));
        }
    }

    #[test]
    fn z4_has_three_normal_subgroups() {
        let g = FiniteGroup::cyclic(4);
        let ns = g.normal_subgroups();
        let sets: Vec<Vec<usize>> = ns.iter().map(|n| n.elements().to_vec()).collect();
        assert_eq!(sets, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
        assert_eq!(FiniteGroup::cyclic(1).normal_subgroups().len(), 1);
        // S3: trivial, A3, S3
        let s3 = FiniteGroup::symmetric_3();
        let sizes: Vec<usize> = s3.normal_subgroups().iter().map(|n| n.len()).collect();
        assert_eq!(sizes, vec![1, 3, 6]);
    }

    #[test]
    fn quotient_matches_coset_oracle() {
        let g = FiniteGroup::cyclic(4);
        let n = g.normal_subgroup(&[0, 2]).unwrap();
        let (q, map) = g.quotient(&n).unwrap();
        assert_eq!(q.order(), 2);
        assert!(map.is_epimorphism());
        // coset enumeration oracle: 0 and 1 name the two cosets
        assert_eq!(map.images(), &[0, 1, 0, 1]);
        assert_eq!(map.kernel().elements(), n.elements());

        let triv = g.normal_subgroup(&[0]).unwrap();
        let (q, map) = g.quotient(&triv).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.is_isomorphic(&g));
        assert_eq!(map.images(), &[0, 1, 2, 3]);

        let whole = g.normal_subgroup(&[0, 1, 2, 3]).unwrap();
        let (q, _) = g.quotient(&whole).unwrap();
        assert_eq!(q.order(), 1);
    }

    #[test]
    fn quotient_kernels_recover_subgroups() {
        for g in [FiniteGroup::cyclic(8), FiniteGroup::dihedral_4()] {
            for n in g.normal_subgroups() {
                let (_, map) = g.quotient(&n).unwrap();
                assert_eq!(map.kernel(), n);
            }
        }
    }

    #[test]
    fn meet_join_on_z4_and_v4() {
        let g = FiniteGroup::cyclic(4);
        let n1 = g.normal_subgroup(&[0, 2]).unwrap();
        let n0 = g.normal_subgroup(&[0]).unwrap();
        let (meet, join) = g.meet_join(&n1, &n0).unwrap();
        assert_eq!(meet.elements(), &[0]);
        assert_eq!(join.elements(), &[0, 2]);
        let (meet, join) = g.meet_join(&n1, &n1).unwrap();
        assert_eq!(meet, n1);
        assert_eq!(join, n1);

        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
            .unwrap();
        let a = v4.normal_subgroup(&[0, 1]).unwrap();
        let b = v4.normal_subgroup(&[0, 2]).unwrap();
        let (meet, join) = v4.meet_join(&a, &b).unwrap();
        assert_eq!(meet.elements(), &[0]);
        assert_eq!(join.elements(), &[0, 1, 2, 3]);
    }

    #[test]
    fn modular_law_holds_in_normal_lattices() {
        // the normal subgroup lattice is modular; checked exhaustively
        for g in [
            FiniteGroup::cyclic(12),
            FiniteGroup::cyclic(16),
            FiniteGroup::dihedral_4(),
            FiniteGroup::quaternion_8(),
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(8)).unwrap(),
        ] {
            let ns = g.normal_subgroups();
            for a in &ns {
                for b in &ns {
                    for c in &ns {
                        if !a.is_subset_of(b) {
                            continue;
                        }
                        let (cb_meet, _) = g.meet_join(c, b).unwrap();
                        let (_, lhs) = g.meet_join(a, &cb_meet).unwrap();
                        let (_, ac_join) = g.meet_join(a, c).unwrap();
                        let (rhs, _) = g.meet_join(&ac_join, b).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn fiber_triple_trivial_targets_gives_full_product() {
        let z2 = FiniteGroup::cyclic(2);
        let t = FiniteGroup::cyclic(1);
        let onto = |g: &FiniteGroup| GroupMap::new(g.clone(), t.clone(), vec![0; g.order()]).unwrap();
        let f = fiber_triple(&onto(&z2), &onto(&z2), &onto(&z2), &onto(&z2), &onto(&z2), &onto(&z2))
            .unwrap();
        assert_eq!(f.order(), 8);
        assert!(f.is_subgroup());
    }

    #[test]
    fn fiber_triple_identity_maps_gives_diagonal() {
        for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric_3()] {
            let id = GroupMap::identity(&g);
            let f = fiber_triple(&id, &id, &id, &id, &id, &id).unwrap();
            assert_eq!(f.order(), g.order());
            assert!(f.as_group().unwrap().is_isomorphic(&g));
            assert!(f.is_subgroup());
            for (a, b, c) in &f.triples {
                assert!(a == b && b == c);
            }
        }
    }

    #[test]
    fn fiber_triple_trivial_sources() {
        let t = FiniteGroup::cyclic(1);
        let id = GroupMap::identity(&t);
        let f = fiber_triple(&id, &id, &id, &id, &id, &id).unwrap();
        assert_eq!(f.triples, vec![(0, 0, 0)]);
        assert!(f.is_subgroup());
    }

    #[test]
    fn group_isomorphism_distinguishes_z4_from_v4() {
        let z4 = FiniteGroup::cyclic(4);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
            .unwrap();
        assert!(!z4.is_isomorphic(&v4));
        assert!(z4.is_isomorphic(&FiniteGroup::cyclic(4)));
        let d4 = FiniteGroup::dihedral_4();
        let q8 = FiniteGroup::quaternion_8();
        assert!(!d4.is_isomorphic(&q8));
        assert!(d4.validate().passed());
        assert!(q8.validate().passed());
        // Z6 = Z2 x Z3
        let z6 = FiniteGroup::cyclic(6);
        let p = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3))
            .unwrap();
        assert!(z6.is_isomorphic(&p));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn corpus() -> Vec<FiniteGroup> {
            vec![
                FiniteGroup::cyclic(1),
                FiniteGroup::cyclic(4),
                FiniteGroup::cyclic(6),
                FiniteGroup::symmetric_3(),
                FiniteGroup::dihedral_4(),
                FiniteGroup::quaternion_8(),
            ]
        }

        proptest! {
            #[test]
            fn quotient_orders_multiply(gi in 0usize..6, pick in 0usize..100) {
                let g = corpus()[gi].clone();
                let ns = g.normal_subgroups();
                let n = &ns[pick % ns.len()];
                let (q, map) = g.quotient(n).unwrap();
                prop_assert_eq!(q.order() * n.len(), g.order());
                prop_assert!(map.is_epimorphism());
                prop_assert_eq!(&map.kernel(), n);
            }

            #[test]
            fn meet_join_are_lattice_ops(gi in 0usize..6, i in 0usize..100, j in 0usize..100) {
                let g = corpus()[gi].clone();
                let ns = g.normal_subgroups();
                let a = &ns[i % ns.len()];
                let b = &ns[j % ns.len()];
                let (meet, join) = g.meet_join(a, b).unwrap();
                prop_assert!(meet.is_subset_of(a) && meet.is_subset_of(b));
                prop_assert!(a.is_subset_of(&join) && b.is_subset_of(&join));
            }
        }
    }
}
