//! The two constructions tying sorted finite groups to complete systems —
//! cosets of normal subgroups in one direction, the inverse limit of class
//! groups in the other — together with dual morphisms, the canonical
//! comparison maps, and the principal-ultraproduct check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::complete_system::{CompleteSystem, SortKey, SystemError};
use crate::groups::{FiniteGroup, GroupError, GroupMap, NormalSubgroup};
use crate::report::{AxiomReport, CheckEntry, WitnessLog};
use crate::sorted_group::{is_sorted_morphism, SortedFiniteGroup, SortedGroupError};
use crate::sorts::{SortFamily, Support};

#[derive(Debug, Error)]
pub enum DualityError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    SortedGroup(#[from] SortedGroupError),
    #[error("support must be nonempty")]
    EmptySupport,
    #[error("map is not a sorted morphism")]
    NotSortedMorphism,
    #[error("target support lacks sort {0}")]
    MissingTargetSort(String),
    #[error("the map is not an embedding: {0}")]
    NotEmbedding(String),
    #[error("inverse limit failed: {0}")]
    Limit(String),
    #[error("embedding does not cover whole classes: {0}")]
    ClassNotOnto(String),
    #[error("invalid factor index {0}")]
    BadIndex(usize),
}

/// `system_of_group` output with the coset bookkeeping the canonical maps
/// need.
#[derive(Debug, Clone)]
pub struct GroupSystem {
    pub system: CompleteSystem,
    pub subgroups: Vec<NormalSubgroup>,
    /// Per element id: (subgroup index, minimal coset representative).
    pub cosets: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize, usize), u32>,
}

impl GroupSystem {
    /// Element id of the coset `g N` in the given sort, if declared there.
    pub fn coset_id(&self, sort_idx: usize, n_idx: usize, rep: usize) -> Option<u32> {
        self.lookup.get(&(sort_idx, n_idx, rep)).copied()
    }
}

fn canonical_sorts(support: &[SortKey]) -> Vec<SortKey> {
    let set: BTreeSet<SortKey> = support.iter().cloned().collect();
    set.into_iter().collect()
}

/// The system of cosets of a sorted finite group over the given support:
/// sort `m(k,J)` holds every coset `g N` with `[G:N] <= k` and `J` in
/// `F(N)`; `<=` compares subgroups, `C` compares cosets, `P` multiplies
/// same-subgroup cosets.
pub fn group_system(
    sg: &SortedFiniteGroup,
    support: &[SortKey],
) -> Result<GroupSystem, DualityError> {
    if support.is_empty() {
        return Err(DualityError::EmptySupport);
    }
    let sorts = canonical_sorts(support);
    let g = sg.group();
    let subgroups = sg.subgroups().to_vec();
    let reps: Vec<Vec<usize>> = subgroups
        .iter()
        .map(|n| g.cosets(n).iter().map(|c| c[0]).collect())
        .collect();

    let mut elements = vec![];
    let mut cosets = vec![];
    let mut lookup = HashMap::new();
    for (si, key) in sorts.iter().enumerate() {
        for (ni, n) in subgroups.iter().enumerate() {
            if n.index() > key.k || !sg.family(ni).contains(&key.tuple) {
                continue;
            }
            for &r in &reps[ni] {
                let id = elements.len() as u32;
                elements.push((si, format!("g{r}·N{ni}@{key}")));
                cosets.push((ni, r));
                lookup.insert((si, ni, r), id);
            }
        }
    }

    let mut leq = vec![];
    let mut c = vec![];
    for (i, &(n1, r1)) in cosets.iter().enumerate() {
        for (j, &(n2, r2)) in cosets.iter().enumerate() {
            if !subgroups[n1].is_subset_of(&subgroups[n2]) {
                continue;
            }
            leq.push((i as u32, j as u32));
            if g.coset_rep(&subgroups[n2], r1) == r2 {
                c.push((i as u32, j as u32));
            }
        }
    }
    let mut p = vec![];
    let elem_sorts: Vec<usize> = elements.iter().map(|(s, _)| *s).collect();
    for (i, &(n1, r1)) in cosets.iter().enumerate() {
        for (j, &(n2, r2)) in cosets.iter().enumerate() {
            if n1 != n2 || elem_sorts[i] != elem_sorts[j] {
                continue;
            }
            let prod = g.coset_rep(&subgroups[n1], g.mul(r1, r2));
            let k = lookup[&(elem_sorts[i], n1, prod)];
            p.push((i as u32, j as u32, k));
        }
    }

    let system = CompleteSystem::new(sorts, elements, leq, c, p)?;
    // elements were generated in canonical order, so ids are unchanged
    debug_assert!((0..system.len() as u32).all(|e| {
        let (ni, r) = cosets[e as usize];
        system.label(e) == format!("g{r}·N{ni}@{}", system.sorts()[system.sort_of(e)])
    }));
    Ok(GroupSystem {
        system,
        subgroups,
        cosets,
        lookup,
    })
}

/// `system_of_group` without the bookkeeping.
pub fn system_of_group(
    sg: &SortedFiniteGroup,
    support: &[SortKey],
) -> Result<CompleteSystem, DualityError> {
    Ok(group_system(sg, support)?.system)
}

/// The inverse limit of the class groups of a system, with the sorting
/// recovered from the kernels.
#[derive(Debug, Clone)]
pub struct SystemLimit {
    pub group: FiniteGroup,
    pub sorted: SortedFiniteGroup,
    /// `families[x][cs]` is the element id the x-th limit element takes at
    /// class-sort `cs` (in the checker's class-sort order).
    pub families: Vec<Vec<u32>>,
    /// (class, sort, members) triples in the same order.
    pub class_sorts: Vec<(usize, usize, Vec<u32>)>,
    pub classes: Vec<Vec<u32>>,
    /// Kernel of the evaluation onto each class, as limit element indices.
    pub class_kernels: Vec<Vec<usize>>,
    /// True when every expected projection existed and the family set was
    /// closed under the componentwise product.
    pub complete: bool,
}

const FAMILY_CAP: usize = 4096;

/// Computes the inverse limit of a system's class groups: all assignments of
/// one element per class-sort compatible with every functional `C`-graph.
#[allow(clippy::needless_range_loop)]
pub fn group_of_system(s: &CompleteSystem) -> Result<SystemLimit, DualityError> {
    let ctx = s.ctx();
    let ncs = ctx.class_sorts.len();
    let mut complete = true;

    // projection functions between related class-sorts
    let mut proj: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for a in 0..ncs {
        for b in 0..ncs {
            if a == b || !ctx.class_leq[ctx.class_sorts[a].class][ctx.class_sorts[b].class] {
                continue;
            }
            match ctx.proj(s, a, b) {
                Some(map) => {
                    proj.insert((a, b), map);
                }
                None => complete = false,
            }
        }
    }

    // assignment order: classes with fewer classes below come first
    let below_count: Vec<usize> = (0..ctx.classes.len())
        .map(|c| (0..ctx.classes.len()).filter(|&d| ctx.class_leq[d][c]).count())
        .collect();
    let mut order: Vec<usize> = (0..ncs).collect();
    order.sort_by_key(|&i| (below_count[ctx.class_sorts[i].class], i));

    let mut families: Vec<Vec<u32>> = vec![];
    let mut stack: Vec<(usize, Vec<Option<usize>>)> = vec![(0, vec![None; ncs])];
    while let Some((depth, assign)) = stack.pop() {
        if depth == ncs {
            let fam: Vec<u32> = (0..ncs)
                .map(|i| ctx.class_sorts[i].members[assign[i].unwrap()])
                .collect();
            families.push(fam);
            if families.len() > FAMILY_CAP {
                return Err(DualityError::Limit("family cap exceeded".into()));
            }
            continue;
        }
        let cs = order[depth];
        let m = ctx.class_sorts[cs].members.len();
        let mut candidates: Vec<usize> = (0..m).collect();
        for prev_depth in 0..depth {
            let other = order[prev_depth];
            let v = assign[other].unwrap();
            if let Some(map) = proj.get(&(other, cs)) {
                candidates.retain(|&x| map[v] == x);
            }
            if let Some(map) = proj.get(&(cs, other)) {
                candidates.retain(|&x| map[x] == v);
            }
        }
        // iterate in reverse so the stack pops candidates in ascending order
        for &cand in candidates.iter().rev() {
            let mut next = assign.clone();
            next[cs] = Some(cand);
            stack.push((depth + 1, next));
        }
    }
    if ncs == 0 {
        families = vec![vec![]];
    }
    families.sort();
    families.dedup();

    // group structure: componentwise product through the class-sort groups
    type MulTable = (Vec<usize>, HashMap<u32, usize>);
    let mut mul_tables: Vec<Option<MulTable>> = vec![];
    for (i, cs) in ctx.class_sorts.iter().enumerate() {
        match &ctx.groups[i] {
            Ok(cg) => {
                let pos: HashMap<u32, usize> = cg
                    .members
                    .iter()
                    .enumerate()
                    .map(|(p, &x)| (x, p))
                    .collect();
                let flat: Vec<usize> = (0..cg.group.order())
                    .flat_map(|x| (0..cg.group.order()).map(move |y| (x, y)))
                    .map(|(x, y)| cg.group.mul(x, y))
                    .collect();
                let _ = cs;
                mul_tables.push(Some((flat, pos)));
            }
            Err(_) => {
                complete = false;
                mul_tables.push(None);
            }
        }
    }
    let identity_family: Option<Vec<u32>> = (0..ncs)
        .map(|i| {
            ctx.groups[i]
                .as_ref()
                .ok()
                .map(|cg| cg.members[0])
        })
        .collect();
    let Some(identity_family) = identity_family else {
        return Err(DualityError::Limit(
            "a class carries no group structure".into(),
        ));
    };
    let fam_index: HashMap<Vec<u32>, usize> = families
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i))
        .collect();
    let Some(&id_idx) = fam_index.get(&identity_family) else {
        return Err(DualityError::Limit(
            "identity family is not compatible".into(),
        ));
    };

    let mul_families = |f: &[u32], g: &[u32]| -> Option<Vec<u32>> {
        (0..ncs)
            .map(|i| {
                let (flat, pos) = mul_tables[i].as_ref()?;
                let cg = ctx.groups[i].as_ref().ok()?;
                let n = cg.group.order();
                let (x, y) = (*pos.get(&f[i])?, *pos.get(&g[i])?);
                Some(cg.members[flat[x * n + y]])
            })
            .collect()
    };

    // renumber with the identity first
    let mut order_fams: Vec<usize> = (0..families.len()).collect();
    order_fams.swap(0, id_idx);
    let fam_rank: HashMap<usize, usize> = order_fams
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let n = families.len();
    let mut table = vec![vec![0usize; n]; n];
    for (i, &fi) in order_fams.iter().enumerate() {
        for (j, &fj) in order_fams.iter().enumerate() {
            let prod = mul_families(&families[fi], &families[fj])
                .ok_or_else(|| DualityError::Limit("product undefined".into()))?;
            let Some(&k) = fam_index.get(&prod) else {
                return Err(DualityError::Limit(
                    "families are not closed under the product".into(),
                ));
            };
            table[i][j] = fam_rank[&k];
        }
    }
    let group = FiniteGroup::from_table(table).map_err(|e| DualityError::Limit(e.to_string()))?;
    let families: Vec<Vec<u32>> = order_fams.iter().map(|&i| families[i].clone()).collect();

    // kernel per class: limit elements evaluating to the class identity
    let mut class_kernels: Vec<Vec<usize>> = vec![];
    for c in 0..ctx.classes.len() {
        let cs = (0..ncs)
            .find(|&i| ctx.class_sorts[i].class == c)
            .expect("every class appears in some sort");
        let id_elem = ctx.groups[cs]
            .as_ref()
            .map(|cg| cg.members[0])
            .map_err(|e| DualityError::Limit(e.clone()))?;
        class_kernels.push(
            (0..n)
                .filter(|&x| families[x][cs] == id_elem)
                .collect(),
        );
    }

    // recovered sorting: each normal subgroup collects the supports of the
    // sort tuples whose kernel matches it
    let subgroups = group.normal_subgroups();
    let mut sorting: Vec<SortFamily> = vec![SortFamily::empty(); subgroups.len()];
    for (i, cs) in ctx.class_sorts.iter().enumerate() {
        let kernel = &class_kernels[cs.class];
        let Some(ni) = subgroups
            .iter()
            .position(|nsg| nsg.elements() == kernel.as_slice())
        else {
            complete = false;
            let _ = i;
            continue;
        };
        let sup = Support::from_terms(s.sorts()[cs.sort].tuple.terms().iter().cloned());
        sorting[ni] = SortFamily::from_generators(
            sorting[ni]
                .generators()
                .iter()
                .cloned()
                .chain(std::iter::once(sup)),
        )
        .expect("supports are nonempty");
    }
    let sorted = SortedFiniteGroup::new(group.clone(), sorting)?;

    Ok(SystemLimit {
        group,
        sorted,
        families,
        class_sorts: ctx
            .class_sorts
            .iter()
            .map(|cs| (cs.class, cs.sort, cs.members.clone()))
            .collect(),
        classes: ctx.classes.clone(),
        class_kernels,
        complete,
    })
}

impl SystemLimit {
    /// Index of the class-sort holding the given element, if any.
    pub fn class_sort_of(&self, elem: u32) -> Option<usize> {
        self.class_sorts
            .iter()
            .position(|(_, _, members)| members.contains(&elem))
    }

    /// Limit elements evaluating to `elem` at its class-sort.
    pub fn fiber_of(&self, elem: u32) -> Vec<usize> {
        match self.class_sort_of(elem) {
            Some(cs) => (0..self.families.len())
                .filter(|&x| self.families[x][cs] == elem)
                .collect(),
            None => vec![],
        }
    }
}

/// A sort-preserving injection between systems that preserves and reflects
/// all three relations.
#[derive(Debug, Clone)]
pub struct SystemEmbedding {
    pub source: CompleteSystem,
    pub target: CompleteSystem,
    pub map: Vec<u32>,
}

/// Validates a candidate embedding map elementwise.
pub fn verify_embedding(
    source: &CompleteSystem,
    target: &CompleteSystem,
    map: &[u32],
) -> Result<(), String> {
    if map.len() != source.len() {
        return Err("map length mismatch".into());
    }
    let mut seen = BTreeSet::new();
    for (x, &y) in map.iter().enumerate() {
        if y as usize >= target.len() {
            return Err(format!("image {y} out of range"));
        }
        if !seen.insert(y) {
            return Err(format!("not injective at {}", source.label(x as u32)));
        }
        let skey = &source.sorts()[source.sort_of(x as u32)];
        let tkey = &target.sorts()[target.sort_of(y)];
        if skey != tkey {
            return Err(format!(
                "sort not preserved at {} ({skey} vs {tkey})",
                source.label(x as u32)
            ));
        }
    }
    // preserve: every source relation tuple maps into a target one
    for &(a, b) in source.leq_pairs() {
        if !target.leq(map[a as usize], map[b as usize]) {
            return Err(format!(
                "<= not preserved on ({}, {})",
                source.label(a),
                source.label(b)
            ));
        }
    }
    for &(a, b) in source.c_pairs() {
        if !target.c_rel(map[a as usize], map[b as usize]) {
            return Err(format!(
                "C not preserved on ({}, {})",
                source.label(a),
                source.label(b)
            ));
        }
    }
    for &(a, b, c) in source.p_triples() {
        if !target.p_rel(map[a as usize], map[b as usize], map[c as usize]) {
            return Err(format!(
                "P not preserved on ({}, {}, {})",
                source.label(a),
                source.label(b),
                source.label(c)
            ));
        }
    }
    // reflect: target relations between image points come from the source
    let mut back: HashMap<u32, u32> = HashMap::new();
    for (x, &y) in map.iter().enumerate() {
        back.insert(y, x as u32);
    }
    for &(a, b) in target.leq_pairs() {
        if let (Some(&x), Some(&y)) = (back.get(&a), back.get(&b)) {
            if !source.leq(x, y) {
                return Err(format!(
                    "<= not reflected on ({}, {})",
                    target.label(a),
                    target.label(b)
                ));
            }
        }
    }
    for &(a, b) in target.c_pairs() {
        if let (Some(&x), Some(&y)) = (back.get(&a), back.get(&b)) {
            if !source.c_rel(x, y) {
                return Err(format!(
                    "C not reflected on ({}, {})",
                    target.label(a),
                    target.label(b)
                ));
            }
        }
    }
    for &(a, b, c) in target.p_triples() {
        if let (Some(&x), Some(&y), Some(&z)) = (back.get(&a), back.get(&b), back.get(&c)) {
            if !source.p_rel(x, y, z) {
                return Err(format!(
                    "P not reflected on ({}, {}, {})",
                    target.label(a),
                    target.label(b),
                    target.label(c)
                ));
            }
        }
    }
    Ok(())
}

/// Exhaustive search for a sort-preserving embedding; None when no
/// assignment survives.
pub fn find_embedding(source: &CompleteSystem, target: &CompleteSystem) -> Option<Vec<u32>> {
    let n = source.len();
    // candidate pools per element: same sort key in the target
    let mut pools: Vec<Vec<u32>> = vec![];
    for x in 0..n as u32 {
        let skey = &source.sorts()[source.sort_of(x)];
        let pool = {
            let t = target.sort_index(skey)?;
            target.elements_of_sort(t)
        };
        if pool.is_empty() {
            return None;
        }
        pools.push(pool);
    }
    let mut map: Vec<u32> = vec![];
    let mut used: BTreeSet<u32> = BTreeSet::new();
    fn consistent(source: &CompleteSystem, target: &CompleteSystem, map: &[u32], x: usize) -> bool {
        let y = map[x];
        for (b, &yb) in map.iter().enumerate() {
            let (xb, x32) = (b as u32, x as u32);
            if source.leq(x32, xb) != target.leq(y, yb)
                || source.leq(xb, x32) != target.leq(yb, y)
                || source.c_rel(x32, xb) != target.c_rel(y, yb)
                || source.c_rel(xb, x32) != target.c_rel(yb, y)
            {
                return false;
            }
            for (c, &yc) in map.iter().enumerate() {
                let xc = c as u32;
                if source.p_rel(x32, xb, xc) != target.p_rel(y, yb, yc)
                    || source.p_rel(xb, x32, xc) != target.p_rel(yb, y, yc)
                    || source.p_rel(xb, xc, x32) != target.p_rel(yb, yc, y)
                {
                    return false;
                }
            }
        }
        true
    }
    fn search(
        source: &CompleteSystem,
        target: &CompleteSystem,
        pools: &[Vec<u32>],
        map: &mut Vec<u32>,
        used: &mut BTreeSet<u32>,
    ) -> bool {
        let x = map.len();
        if x == source.len() {
            return true;
        }
        for &y in &pools[x] {
            if used.contains(&y) {
                continue;
            }
            map.push(y);
            used.insert(y);
            if consistent(source, target, map, x)
                && search(source, target, pools, map, used)
            {
                return true;
            }
            map.pop();
            used.remove(&y);
        }
        false
    }
    if search(source, target, &pools, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Dual of a sorted morphism `pi : G1 -> G2`: the embedding of the system of
/// `G2` into the system of `G1` sending `g H` to `g' pi^-1[H]`.
pub fn dual_group_morphism(
    pi: &GroupMap,
    sg1: &SortedFiniteGroup,
    support1: &[SortKey],
    sg2: &SortedFiniteGroup,
    support2: &[SortKey],
) -> Result<SystemEmbedding, DualityError> {
    if !is_sorted_morphism(pi, sg1, sg2)? {
        return Err(DualityError::NotSortedMorphism);
    }
    let gs1 = group_system(sg1, support1)?;
    let gs2 = group_system(sg2, support2)?;
    let mut map = vec![];
    for e in 0..gs2.system.len() as u32 {
        let (ni, rep) = gs2.cosets[e as usize];
        let pre = pi.preimage(&gs2.subgroups[ni])?;
        let pre_idx = gs1
            .subgroups
            .iter()
            .position(|n| *n == pre)
            .expect("preimage of a normal subgroup is normal");
        let lift = (0..pi.source().order())
            .find(|&x| pi.apply(x) == rep)
            .expect("sorted morphisms are onto");
        let lift_rep = sg1.group().coset_rep(&pre, lift);
        let key = &gs2.system.sorts()[gs2.system.sort_of(e)];
        let sort_idx = gs1
            .system
            .sort_index(key)
            .ok_or_else(|| DualityError::MissingTargetSort(key.to_string()))?;
        let id = gs1
            .coset_id(sort_idx, pre_idx, lift_rep)
            .ok_or_else(|| DualityError::MissingTargetSort(key.to_string()))?;
        map.push(id);
    }
    verify_embedding(&gs2.system, &gs1.system, &map).map_err(DualityError::NotEmbedding)?;
    Ok(SystemEmbedding {
        source: gs2.system,
        target: gs1.system,
        map,
    })
}

/// Dual of a system embedding `f : S -> S'`: the epimorphism from the limit
/// of `S'` onto the limit of `S` restricting each compatible family along
/// the image. Requires `f` to cover whole classes of `S'` (true for every
/// dual of a sorted morphism).
pub fn dual_system_embedding(emb: &SystemEmbedding) -> Result<GroupMap, DualityError> {
    verify_embedding(&emb.source, &emb.target, &emb.map).map_err(DualityError::NotEmbedding)?;
    let lim_s = group_of_system(&emb.source)?;
    let lim_t = group_of_system(&emb.target)?;
    // locate, for each class-sort of S, the class-sort of S' its image fills
    let mut image_cs: Vec<(usize, HashMap<u32, u32>)> = vec![];
    for (_, _, members) in &lim_s.class_sorts {
        let images: Vec<u32> = members.iter().map(|&x| emb.map[x as usize]).collect();
        let tcs = lim_t
            .class_sort_of(images[0])
            .expect("image element belongs to a class-sort");
        let tmembers = &lim_t.class_sorts[tcs].2;
        if tmembers.len() != images.len() || !images.iter().all(|y| tmembers.contains(y)) {
            return Err(DualityError::ClassNotOnto(format!(
                "image of class of {} is a proper subset",
                emb.source.label(members[0])
            )));
        }
        let back: HashMap<u32, u32> = members
            .iter()
            .zip(&images)
            .map(|(&x, &y)| (y, x))
            .collect();
        image_cs.push((tcs, back));
    }
    let fam_index: HashMap<Vec<u32>, usize> = lim_s
        .families
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i))
        .collect();
    let mut images = vec![];
    for fam_t in &lim_t.families {
        let restricted: Vec<u32> = image_cs
            .iter()
            .map(|(tcs, back)| back[&fam_t[*tcs]])
            .collect();
        let idx = fam_index
            .get(&restricted)
            .ok_or_else(|| DualityError::Limit("restricted family is incompatible".into()))?;
        images.push(*idx);
    }
    let map = GroupMap::new(lim_t.group.clone(), lim_s.group.clone(), images)?;
    if !map.is_epimorphism() {
        return Err(DualityError::Limit("dual map is not onto".into()));
    }
    Ok(map)
}

/// Result of the canonical map from a sorted group into the limit of its own
/// system.
#[derive(Debug)]
pub struct AlphaResult {
    pub map: GroupMap,
    /// The represented subgroups intersect to the identity.
    pub faithful: bool,
    pub injective: bool,
    pub surjective: bool,
}

/// `alpha(g) = (g N)_N` over every coset sort of the system of `sg`.
pub fn alpha(sg: &SortedFiniteGroup, support: &[SortKey]) -> Result<AlphaResult, DualityError> {
    let gs = group_system(sg, support)?;
    alpha_with(sg, &gs)
}

fn alpha_with(sg: &SortedFiniteGroup, gs: &GroupSystem) -> Result<AlphaResult, DualityError> {
    let limit = group_of_system(&gs.system)?;
    alpha_from_limit(sg, gs, &limit)
}

fn alpha_from_limit(
    sg: &SortedFiniteGroup,
    gs: &GroupSystem,
    limit: &SystemLimit,
) -> Result<AlphaResult, DualityError> {
    let g = sg.group();
    let fam_index: HashMap<Vec<u32>, usize> = limit
        .families
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i))
        .collect();
    let mut images = vec![];
    for x in 0..g.order() {
        let fam: Vec<u32> = limit
            .class_sorts
            .iter()
            .map(|(_, sort, members)| {
                let (ni, _) = gs.cosets[members[0] as usize];
                let rep = g.coset_rep(&gs.subgroups[ni], x);
                gs.coset_id(*sort, ni, rep)
                    .expect("coset sort holds every coset")
            })
            .collect();
        let idx = fam_index
            .get(&fam)
            .ok_or_else(|| DualityError::Limit("alpha image is not a compatible family".into()))?;
        images.push(*idx);
    }
    let map = GroupMap::new(g.clone(), limit.group.clone(), images)?;
    let mut meet: Vec<usize> = (0..g.order()).collect();
    let mut represented = vec![false; gs.subgroups.len()];
    for &(ni, _) in &gs.cosets {
        represented[ni] = true;
    }
    for (ni, n) in gs.subgroups.iter().enumerate() {
        if represented[ni] {
            meet.retain(|&x| n.contains(x));
        }
    }
    let faithful = meet == vec![0];
    let injective = {
        let mut seen = BTreeSet::new();
        map.images().iter().all(|&v| seen.insert(v))
    };
    let surjective = {
        let seen: BTreeSet<usize> = map.images().iter().copied().collect();
        seen.len() == limit.group.order()
    };
    Ok(AlphaResult {
        map,
        faithful,
        injective,
        surjective,
    })
}

/// Result of the canonical map from a system into the system of its own
/// limit.
#[derive(Debug)]
pub struct BetaResult {
    pub target: GroupSystem,
    /// Image element per source element, when the evaluation hits it.
    pub map: Vec<Option<u32>>,
    pub total: bool,
    pub injective_on_classes: bool,
    pub source_class_count: usize,
    pub target_class_count: usize,
}

/// `beta(a) = g N_a`: the coset of the kernel of evaluation-at-`a` made of
/// the limit elements evaluating to `a`, placed in a's own sort.
pub fn beta(s: &CompleteSystem) -> Result<BetaResult, DualityError> {
    let limit = group_of_system(s)?;
    beta_from_limit(s, &limit)
}

fn beta_from_limit(s: &CompleteSystem, limit: &SystemLimit) -> Result<BetaResult, DualityError> {
    let target = group_system(&limit.sorted, s.sorts())?;
    let mut map = vec![];
    let mut total = true;
    for a in 0..s.len() as u32 {
        let fiber = limit.fiber_of(a);
        if fiber.is_empty() {
            map.push(None);
            total = false;
            continue;
        }
        let cs = limit.class_sort_of(a).expect("element has a class-sort");
        let class = limit.class_sorts[cs].0;
        let kernel = &limit.class_kernels[class];
        let n_idx = target
            .subgroups
            .iter()
            .position(|n| n.elements() == kernel.as_slice());
        let Some(n_idx) = n_idx else {
            map.push(None);
            total = false;
            continue;
        };
        let rep = *fiber.iter().min().unwrap();
        let rep = limit
            .group
            .cosets(&target.subgroups[n_idx])
            .into_iter()
            .find(|c| c.contains(&rep))
            .map(|c| c[0])
            .unwrap();
        let id = target.coset_id(s.sort_of(a), n_idx, rep);
        match id {
            Some(v) => map.push(Some(v)),
            None => {
                map.push(None);
                total = false;
            }
        }
    }
    let src_classes = s.tilde_classes().classes;
    let tgt_classes = target.system.tilde_classes().classes;
    let mut image_class_of_source_class: BTreeSet<usize> = BTreeSet::new();
    let mut injective_on_classes = true;
    let mut seen_pairs: BTreeMap<usize, usize> = BTreeMap::new();
    for (ci, class) in src_classes.iter().enumerate() {
        let Some(Some(img)) = map.get(class[0] as usize).copied() else {
            continue;
        };
        let tci = tgt_classes
            .iter()
            .position(|c| c.contains(&img))
            .expect("image element has a class");
        if let Some(prev) = seen_pairs.insert(tci, ci) {
            if prev != ci {
                injective_on_classes = false;
            }
        }
        image_class_of_source_class.insert(tci);
    }
    Ok(BetaResult {
        target,
        map,
        total,
        injective_on_classes,
        source_class_count: src_classes.len(),
        target_class_count: tgt_classes.len(),
    })
}

/// Runs the three round-trip checks: alpha is an isomorphism, beta is an
/// isomorphism onto the system of the limit, and pulling beta back through
/// alpha is the identity on the coset system.
pub fn check_alpha_beta(sg: &SortedFiniteGroup, support: &[SortKey]) -> AxiomReport {
    match group_system(sg, support) {
        Ok(gs) => check_alpha_beta_with(sg, &gs),
        Err(e) => {
            let mut report = AxiomReport::new();
            report.push(CheckEntry::fail(
                "alpha-isomorphism",
                0,
                0,
                vec![e.to_string()],
            ));
            report
        }
    }
}

/// Same checks against a caller-supplied system (used to exercise seeded
/// mutations of the coset system).
pub fn check_alpha_beta_with(sg: &SortedFiniteGroup, gs: &GroupSystem) -> AxiomReport {
    let mut report = AxiomReport::new();
    let limit = match group_of_system(&gs.system) {
        Ok(l) => l,
        Err(e) => {
            report.push(CheckEntry::fail(
                "alpha-isomorphism",
                0,
                0,
                vec![e.to_string()],
            ));
            report.push(CheckEntry::unsupported(
                "beta-isomorphism",
                "limit is unavailable",
            ));
            report.push(CheckEntry::unsupported(
                "composite-identity",
                "limit is unavailable",
            ));
            return report;
        }
    };

    // (i) alpha
    let alpha_res = match alpha_from_limit(sg, gs, &limit) {
        Ok(r) => {
            let mut log = WitnessLog::new(3);
            if !r.injective {
                log.record("alpha is not injective".into());
            }
            if !r.surjective {
                log.record("alpha is not onto the limit".into());
            }
            if !r.faithful {
                log.record("support is not faithful".into());
            }
            report.finish("alpha-isomorphism", sg.group().order(), 0, log);
            Some(r)
        }
        Err(e) => {
            report.push(CheckEntry::fail(
                "alpha-isomorphism",
                0,
                0,
                vec![e.to_string()],
            ));
            None
        }
    };

    // (ii) beta
    match beta_from_limit(&gs.system, &limit) {
        Ok(b) => {
            let mut log = WitnessLog::new(3);
            if !b.total {
                log.record("beta is not total".into());
            }
            let map: Vec<u32> = b
                .map
                .iter()
                .map(|m| m.unwrap_or(u32::MAX))
                .collect();
            if b.total {
                if b.target.system.len() != gs.system.len() {
                    log.record(format!(
                        "beta target has {} elements, source {}",
                        b.target.system.len(),
                        gs.system.len()
                    ));
                } else if let Err(e) = verify_embedding(&gs.system, &b.target.system, &map) {
                    log.record(format!("beta is not an isomorphism: {e}"));
                }
            }
            report.finish("beta-isomorphism", gs.system.len(), 0, log);
        }
        Err(e) => {
            report.push(CheckEntry::fail(
                "beta-isomorphism",
                0,
                0,
                vec![e.to_string()],
            ));
        }
    }

    // (iii) S(alpha) . beta = id
    let mut log = WitnessLog::new(3);
    let mut checked = 0;
    match (alpha_res, limit) {
        (Some(a), limit) => {
            let g = sg.group();
            for e in 0..gs.system.len() as u32 {
                checked += 1;
                let fiber: BTreeSet<usize> = limit.fiber_of(e).into_iter().collect();
                let pulled: BTreeSet<usize> = (0..g.order())
                    .filter(|&x| fiber.contains(&a.map.apply(x)))
                    .collect();
                let (ni, rep) = gs.cosets[e as usize];
                let coset: BTreeSet<usize> = (0..g.order())
                    .filter(|&x| g.coset_rep(&gs.subgroups[ni], x) == rep)
                    .collect();
                if pulled != coset {
                    log.record(format!(
                        "composite moves {}",
                        gs.system.label(e)
                    ));
                }
            }
            report.finish("composite-identity", checked, 0, log);
        }
        (None, _) => {
            report.push(CheckEntry::unsupported(
                "composite-identity",
                "alpha is unavailable",
            ));
        }
    }
    report
}

/// Ultraproduct of coset systems at a principal ultrafilter: the recipe
/// projects each componentwise relation through the filter, which reads off
/// coordinate `i0`; the resulting quotient must be isomorphic to the system
/// of the chosen factor.
pub fn principal_ultraproduct(
    factors: &[SortedFiniteGroup],
    i0: usize,
    support: &[SortKey],
) -> Result<AxiomReport, DualityError> {
    if i0 >= factors.len() {
        return Err(DualityError::BadIndex(i0));
    }
    let systems: Vec<GroupSystem> = factors
        .iter()
        .map(|f| group_system(f, support))
        .collect::<Result<_, _>>()?;
    let base = &systems[i0].system;
    let mut report = AxiomReport::new();

    // every factor must populate the sorts the chosen factor populates
    let mut log = WitnessLog::new(3);
    for (si, key) in base.sorts().iter().enumerate() {
        if base.elements_of_sort(si).is_empty() {
            continue;
        }
        for (fi, gs) in systems.iter().enumerate() {
            let t = gs.system.sort_index(key).expect("same support");
            if gs.system.elements_of_sort(t).is_empty() {
                log.record(format!("factor {fi} has empty {key}"));
            }
        }
    }
    let empty_trouble = !log.is_empty();
    report.finish("factor-supports-nonempty", base.sorts().len(), 0, log);
    if empty_trouble {
        return Ok(report);
    }

    // representative tuples: minimal element elsewhere, `a` at i0
    let tuples: Vec<Vec<u32>> = (0..base.len() as u32)
        .map(|a| {
            systems
                .iter()
                .enumerate()
                .map(|(fi, gs)| {
                    if fi == i0 {
                        a
                    } else {
                        let key = &base.sorts()[base.sort_of(a)];
                        let t = gs.system.sort_index(key).expect("same support");
                        gs.system.elements_of_sort(t)[0]
                    }
                })
                .collect()
        })
        .collect();
    // Los at a principal filter: the filtered componentwise relation equals
    // the relation at i0
    let filter_holds = |bits: &[bool]| bits[i0];
    let mut quot_leq = vec![];
    let mut quot_c = vec![];
    for (x, tx) in tuples.iter().enumerate() {
        for (y, ty) in tuples.iter().enumerate() {
            let leq_bits: Vec<bool> = systems
                .iter()
                .enumerate()
                .map(|(fi, gs)| gs.system.leq(tx[fi], ty[fi]))
                .collect();
            if filter_holds(&leq_bits) {
                quot_leq.push((x as u32, y as u32));
            }
            let c_bits: Vec<bool> = systems
                .iter()
                .enumerate()
                .map(|(fi, gs)| gs.system.c_rel(tx[fi], ty[fi]))
                .collect();
            if filter_holds(&c_bits) {
                quot_c.push((x as u32, y as u32));
            }
        }
    }
    let mut quot_p = vec![];
    for (x, tx) in tuples.iter().enumerate() {
        for (y, ty) in tuples.iter().enumerate() {
            if base.sort_of(x as u32) != base.sort_of(y as u32) {
                continue;
            }
            for (z, tz) in tuples.iter().enumerate() {
                if base.sort_of(z as u32) != base.sort_of(x as u32) {
                    continue;
                }
                let bits: Vec<bool> = systems
                    .iter()
                    .enumerate()
                    .map(|(fi, gs)| gs.system.p_rel(tx[fi], ty[fi], tz[fi]))
                    .collect();
                if filter_holds(&bits) {
                    quot_p.push((x as u32, y as u32, z as u32));
                }
            }
        }
    }
    let elements: Vec<(usize, String)> = (0..base.len() as u32)
        .map(|a| (base.sort_of(a), format!("[{}]", base.label(a))))
        .collect();
    let quotient = CompleteSystem::new(
        base.sorts().to_vec(),
        elements,
        quot_leq,
        quot_c,
        quot_p,
    )?;
    // phi maps the class of a representative tuple to its i0 coordinate,
    // which here is the identity on indices
    let phi: Vec<u32> = (0..base.len() as u32).collect();
    let mut log = WitnessLog::new(3);
    if let Err(e) = verify_embedding(&quotient, base, &phi) {
        log.record(e);
    }
    report.finish("phi-isomorphism", base.len(), 0, log);
    Ok(report)
}
