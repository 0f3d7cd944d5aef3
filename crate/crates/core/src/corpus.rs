//! Reference structures: named small groups with their standard sortings,
//! canonical supports, the regular orbit model, and the counterexample
//! separating the kernel axiom from the rest.

use thiserror::Error;

use crate::complete_system::{CompleteSystem, SortKey, SystemError};
use crate::groups::{FiniteGroup, GroupError};
use crate::interpretation::regular_model as build_regular_model;
use crate::interpretation::GaloisActionModel;
use crate::sorted_group::{SortedFiniteGroup, SortedGroupError};
use crate::sorts::{j_star_sub, SortFamily, SortTerm, SortTuple, Support};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown corpus group {0}")]
    UnknownName(String),
    #[error("k-cap must be at least 4, got {0}")]
    CapTooSmall(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    SortedGroup(#[from] SortedGroupError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// The corpus group names of order at most 16.
pub fn corpus_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=16).map(|n| format!("Z{n}")).collect();
    names.extend(["V4", "S3", "D4", "Q8"].map(String::from));
    names
}

/// A named small group.
pub fn group_by_name(name: &str) -> Result<FiniteGroup, CorpusError> {
    if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=16).contains(&n) {
            return Ok(FiniteGroup::cyclic(n));
        }
    }
    match name {
        "V4" => Ok(FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2),
            &FiniteGroup::cyclic(2),
        )?),
        "S3" => Ok(FiniteGroup::symmetric_3()),
        "D4" => Ok(FiniteGroup::dihedral_4()),
        "Q8" => Ok(FiniteGroup::quaternion_8()),
        _ => Err(CorpusError::UnknownName(name.to_string())),
    }
}

/// The maximal one-sort sorting over base sort `A`: every family generated
/// by `{A}`, then saturated.
pub fn maximal_one_sort(group: FiniteGroup) -> Result<SortedFiniteGroup, CorpusError> {
    let count = group.normal_subgroups().len();
    let fam = SortFamily::from_generators(vec![Support::from_terms(vec![SortTerm::base("A")])])
        .expect("nonempty generator");
    Ok(SortedFiniteGroup::new(group, vec![fam; count])?.saturate_sorting())
}

/// A named corpus group with the maximal one-sort sorting. Sortings pulled
/// back along a quotient chain are built with `pullback_sorting`.
pub fn standard_sorted_group(name: &str) -> Result<SortedFiniteGroup, CorpusError> {
    maximal_one_sort(group_by_name(name)?)
}

/// Every corpus sorted group of order at most 16.
pub fn corpus_sorted_groups() -> Vec<(String, SortedFiniteGroup)> {
    corpus_names()
        .into_iter()
        .map(|n| {
            let sg = standard_sorted_group(&n).expect("corpus names are valid");
            (n, sg)
        })
        .collect()
}

/// The canonical faithful support of a sorted group: plain and paired
/// base-sort tuples at every product of subgroup indexes, the set-code
/// tuples the subgroup and kernel axioms name, and one permuted variant so
/// the permutation scheme has a live instance.
pub fn canonical_support(sg: &SortedFiniteGroup) -> Vec<SortKey> {
    let order = sg.group().order();
    let mut indexes: Vec<usize> = sg.subgroups().iter().map(|n| n.index()).collect();
    indexes.sort_unstable();
    indexes.dedup();
    let mut ks: Vec<usize> = indexes.clone();
    for &i in &indexes {
        for &j in &indexes {
            if i * j <= order {
                ks.push(i * j);
            }
        }
    }
    ks.sort_unstable();
    ks.dedup();

    let a = SortTuple::single("A");
    let aa = SortTuple::repeated("A", 2).expect("n > 0");
    let mut sorts = vec![];
    for &k in &ks {
        sorts.push(SortKey::new(k, a.clone()));
        sorts.push(SortKey::new(k, aa.clone()));
    }
    for &j in &indexes {
        let jsub = j_star_sub(j, &a).expect("j >= 1");
        for &k in &ks {
            if j <= k {
                sorts.push(SortKey::new(k, jsub.clone()));
            }
        }
    }
    if indexes.contains(&2) {
        let jsub2 = j_star_sub(2, &a).expect("positive");
        let swapped = SortTuple::new(vec![
            jsub2.terms()[1].clone(),
            jsub2.terms()[0].clone(),
        ])
        .expect("nonempty");
        for &k in &ks {
            if k >= 2 {
                sorts.push(SortKey::new(k, swapped.clone()));
            }
        }
    }
    sorts
}

/// Support for interpretation checks: one plain sort per subgroup index that
/// fits under the tuple-length bound.
pub fn interp_support(sg: &SortedFiniteGroup, bound: usize) -> Vec<SortKey> {
    let a = SortTuple::single("A");
    let mut indexes: Vec<usize> = sg
        .subgroups()
        .iter()
        .map(|n| n.index())
        .filter(|&i| i <= bound)
        .collect();
    indexes.sort_unstable();
    indexes.dedup();
    indexes
        .into_iter()
        .map(|k| SortKey::new(k, a.clone()))
        .collect()
}

/// The regular orbit model of a sorted group: one orbit of cosets per
/// normal subgroup.
pub fn regular_model(sg: &SortedFiniteGroup) -> GaloisActionModel {
    build_regular_model(sg)
}

/// The counterexample structure separating the kernel axiom from the other
/// schemes: four chains `X_0 -> X_1, X_2 -> X_3` of cyclic quotients where
/// the two middle levels carry equal projection kernels without being
/// equivalent. Sorts `m(k)` for `k` up to the cap hold diagonal copies of
/// every part of size at most `k`.
pub fn hidden_axiom_example(kcap: usize) -> Result<CompleteSystem, CorpusError> {
    // the size-4 level first appears in m(4); below that the structure
    // cannot witness the kernel collision
    if kcap < 4 {
        return Err(CorpusError::CapTooSmall(kcap));
    }
    let part_sizes = [4usize, 2, 2, 1];
    let a = SortTuple::single("A");
    let sorts: Vec<SortKey> = (1..=kcap).map(|k| SortKey::new(k, a.clone())).collect();

    // elements: (sort index, part, point)
    let mut elements = vec![];
    let mut placed: Vec<(usize, usize, usize)> = vec![];
    for (si, key) in sorts.iter().enumerate() {
        for (part, &size) in part_sizes.iter().enumerate() {
            if size > key.k {
                continue;
            }
            for p in 0..size {
                elements.push((si, format!("x{part}_{p}@m{}", key.k)));
                placed.push((si, part, p));
            }
        }
    }

    let base_leq = |i: usize, j: usize| -> bool {
        if i > j || (i.min(j), i.max(j)) == (1, 2) {
            return false;
        }
        true
    };
    let base_c = |i: usize, p: usize, j: usize, q: usize| -> bool {
        if i > j || (i.min(j), i.max(j)) == (1, 2) {
            return false;
        }
        if i == j {
            return p == q;
        }
        if i == 0 && (j == 1 || j == 2) {
            return p % 2 == q;
        }
        true // remaining pairs target the singleton level
    };

    let n = placed.len() as u32;
    let mut leq = vec![];
    let mut c = vec![];
    for x in 0..n {
        let (_, i, p) = placed[x as usize];
        for y in 0..n {
            let (_, j, q) = placed[y as usize];
            if base_leq(i, j) {
                leq.push((x, y));
            }
            if base_c(i, p, j, q) {
                c.push((x, y));
            }
        }
    }
    let mut p_rel = vec![];
    for x in 0..n {
        let (sx, i, p) = placed[x as usize];
        for y in 0..n {
            let (sy, j, q) = placed[y as usize];
            if sx != sy || i != j {
                continue;
            }
            for z in 0..n {
                let (sz, l, r) = placed[z as usize];
                if sz != sx || l != i {
                    continue;
                }
                let m = part_sizes[i];
                if (p + q) % m == r {
                    p_rel.push((x, y, z));
                }
            }
        }
    }
    Ok(CompleteSystem::new(sorts, elements, leq, c, p_rel)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complete_system::item_status;
    use crate::report::CheckStatus;
    use crate::duality::{find_embedding, group_of_system, group_system};
    use crate::interpretation::check_interpretation;

    #[test]
    fn corpus_groups_all_pass_their_axioms() {
        for (name, sg) in corpus_sorted_groups() {
            assert!(sg.check_sorted_axioms().passed(), "{name}");
        }
    }

    #[test]
    fn s3_has_three_subgroups_with_base_generator() {
        let sg = standard_sorted_group("S3").unwrap();
        assert_eq!(sg.subgroups().len(), 3);
        let a = SortTuple::single("A");
        for i in 0..3 {
            assert!(sg.family(i).contains(&a));
        }
    }

    #[test]
    fn hidden_example_axioms_one_to_seven_pass_eight_fails() {
        let s = hidden_axiom_example(4).unwrap();
        let report = s.check_axioms();
        for item in 1..=7 {
            assert_eq!(
                item_status(&report, item),
                CheckStatus::Pass,
                "item {item}: {report}"
            );
        }
        assert_eq!(item_status(&report, 8), CheckStatus::Fail, "{report}");
        // a higher cap keeps the verdicts
        let s5 = hidden_axiom_example(5).unwrap();
        let report5 = s5.check_axioms();
        assert_eq!(item_status(&report5, 8), CheckStatus::Fail);
        for item in 1..=7 {
            assert_eq!(item_status(&report5, item), CheckStatus::Pass, "item {item}");
        }
        assert!(hidden_axiom_example(3).is_err());
    }

    #[test]
    fn hidden_example_quantities() {
        let s = hidden_axiom_example(4).unwrap();
        let tc = s.tilde_classes();
        assert!(tc.equivalence_violation.is_none());
        assert_eq!(tc.classes.len(), 4);
        // class groups: Z4, Z2, Z2, trivial
        let find = |label: &str| (0..s.len() as u32).find(|&e| s.label(e) == label).unwrap();
        let x0 = find("x0_0@m4");
        let cg = s.class_group(x0).unwrap();
        assert!(cg.group.is_isomorphic(&FiniteGroup::cyclic(4)));
        let x1 = find("x1_0@m2");
        assert!(s.class_group(x1).unwrap().group.is_isomorphic(&FiniteGroup::cyclic(2)));
        let x2 = find("x2_0@m2");
        assert!(s.class_group(x2).unwrap().group.is_isomorphic(&FiniteGroup::cyclic(2)));
        let x3 = find("x3_0@m1");
        assert_eq!(s.class_group(x3).unwrap().group.order(), 1);
        // both projections out of the big class share the kernel
        let proj1 = s.projection(x0, x1).unwrap();
        let proj2 = s.projection(x0, x2).unwrap();
        let k1: Vec<&str> = proj1.kernel.iter().map(|&e| s.label(e)).collect();
        let k2: Vec<&str> = proj2.kernel.iter().map(|&e| s.label(e)).collect();
        assert_eq!(k1, vec!["x0_0@m4", "x0_2@m4"]);
        assert_eq!(k2, vec!["x0_0@m4", "x0_2@m4"]);
        // meet and join of the two middle classes
        let meet = s.class_meet(x1, x2).unwrap();
        assert!(meet.contains(&x0));
        let join = s.class_join(x1, x2).unwrap();
        assert!(join.contains(&x3));
    }

    #[test]
    fn hidden_example_limit_is_z4_and_no_embedding_back() {
        let s = hidden_axiom_example(4).unwrap();
        let limit = group_of_system(&s).unwrap();
        assert_eq!(limit.group.order(), 4);
        assert!(limit.group.is_isomorphic(&FiniteGroup::cyclic(4)));
        let dual = group_system(&limit.sorted, s.sorts()).unwrap();
        assert_eq!(dual.system.tilde_classes().classes.len(), 3);
        assert!(find_embedding(&s, &dual.system).is_none());
    }

    #[test]
    fn canonical_support_is_faithful_and_varied() {
        let sg = standard_sorted_group("Z4").unwrap();
        let sup = canonical_support(&sg);
        let a = SortTuple::single("A");
        assert!(sup.contains(&SortKey::new(4, a.clone())));
        assert!(sup.iter().any(|k| k.tuple.len() == 2));
        assert!(sup.iter().any(|k| k.tuple.terms()[0].depth() == 1));
    }

    #[test]
    fn regular_models_interpret_correctly_at_small_scale() {
        for name in ["Z1", "Z2", "Z4"] {
            let sg = standard_sorted_group(name).unwrap();
            let model = regular_model(&sg);
            let sup = interp_support(&sg, 4);
            let report = check_interpretation(&model, &sup, 4);
            assert!(report.passed(), "{name}: {report}");
        }
    }
}
