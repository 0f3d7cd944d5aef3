//! Acceptance suite: one test per criterion, each printing a verdict line.
//! Every tolerance here is exact; the only numeric bounds are wall-clock
//! budgets, asserted against the stated limits.

use std::time::Instant;

use sorted_systems::complete_system::{item_status, CompleteSystem, SortKey};
use sorted_systems::corpus::{
    canonical_support, corpus_sorted_groups, group_by_name, hidden_axiom_example, interp_support,
    maximal_one_sort, regular_model, standard_sorted_group,
};
use sorted_systems::duality::{
    check_alpha_beta, check_alpha_beta_with, dual_group_morphism, dual_system_embedding,
    find_embedding, group_of_system, group_system, principal_ultraproduct, system_of_group,
};
use sorted_systems::groups::{fiber_triple, FiniteGroup, GroupMap};
use sorted_systems::interpretation::{
    check_interpretation, check_unique_approx, dcl_iff_primitive, derived_sorted_group,
};
use sorted_systems::report::CheckStatus;
use sorted_systems::sorted_group::pullback_sorting;
use sorted_systems::sorts::SortTuple;

fn verdict(name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {name}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {name} failed: {detail}");
}

/// Criterion 1: the counterexample has the exact published shape.
#[test]
fn criterion_1_hidden_axiom_counterexample() {
    let t0 = Instant::now();
    let s = hidden_axiom_example(4).unwrap();
    let report = s.check_axioms();
    for item in 1..=7 {
        assert_eq!(
            item_status(&report, item),
            CheckStatus::Pass,
            "axiom item {item} must pass: {report}"
        );
    }
    assert_eq!(item_status(&report, 8), CheckStatus::Fail, "{report}");

    let find = |label: &str| (0..s.len() as u32).find(|&e| s.label(e) == label).unwrap();
    let (x0, x1, x2) = (find("x0_0@m4"), find("x1_0@m2"), find("x2_0@m2"));
    let k1: Vec<&str> = s
        .projection(x0, x1)
        .unwrap()
        .kernel
        .iter()
        .map(|&e| s.label(e))
        .collect();
    let k2: Vec<&str> = s
        .projection(x0, x2)
        .unwrap()
        .kernel
        .iter()
        .map(|&e| s.label(e))
        .collect();
    assert_eq!(k1, vec!["x0_0@m4", "x0_2@m4"]);
    assert_eq!(k1, k2);

    let tc = s.tilde_classes();
    assert!(tc.equivalence_violation.is_none());
    assert_eq!(tc.classes.len(), 4);

    let limit = group_of_system(&s).unwrap();
    assert_eq!(limit.group.order(), 4);
    assert!(limit.group.is_isomorphic(&FiniteGroup::cyclic(4)));

    let dual = system_of_group(&limit.sorted, s.sorts()).unwrap();
    assert_eq!(dual.tilde_classes().classes.len(), 3);
    assert!(find_embedding(&s, &dual).is_none());

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    verdict(
        "1 hidden-axiom counterexample",
        true,
        &format!(
            "axioms 1-7 pass, 8 fails; kernel {{x0_0,x0_2}}; 4 vs 3 classes; limit Z/4; no embedding; {elapsed:?}"
        ),
    );
}

/// Criterion 2: full round-trip duality over the whole corpus.
#[test]
fn criterion_2_round_trip_duality() {
    let t0 = Instant::now();
    let mut count = 0;
    for (name, sg) in corpus_sorted_groups() {
        let support = canonical_support(&sg);
        let gs = group_system(&sg, &support).unwrap();
        let axioms = gs.system.check_axioms();
        assert!(axioms.passed(), "{name}: {axioms}");
        let rt = check_alpha_beta_with(&sg, &gs);
        for entry in ["alpha-isomorphism", "beta-isomorphism", "composite-identity"] {
            assert_eq!(
                rt.status(entry),
                Some(CheckStatus::Pass),
                "{name} {entry}: {rt}"
            );
        }
        count += 1;
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    verdict(
        "2 round-trip duality",
        true,
        &format!("{count} corpus groups, all axioms and alpha/beta/composite exact; {elapsed:?}"),
    );
}

/// Criterion 3: sort sizes match the coset-counting formula.
#[test]
fn criterion_3_counting_formula() {
    let mut sorts_checked = 0;
    for (name, sg) in corpus_sorted_groups() {
        let support = canonical_support(&sg);
        let system = system_of_group(&sg, &support).unwrap();
        for (si, key) in system.sorts().iter().enumerate() {
            let got = system.elements_of_sort(si).len();
            let expected: usize = sg
                .subgroups()
                .iter()
                .enumerate()
                .filter(|(ni, n)| n.index() <= key.k && sg.family(*ni).contains(&key.tuple))
                .map(|(_, n)| n.index())
                .sum();
            assert_eq!(got, expected, "{name} sort {key}");
            sorts_checked += 1;
        }
    }
    verdict(
        "3 counting formula",
        true,
        &format!("{sorts_checked} declared sorts match the index sum exactly"),
    );
}

/// Criterion 4: contravariance on the Z/8 -> Z/4 -> Z/2 chain.
#[test]
fn criterion_4_contravariant_functoriality() {
    let z8 = FiniteGroup::cyclic(8);
    let sg8 = maximal_one_sort(z8.clone()).unwrap();
    let n = z8.normal_subgroup(&[0, 4]).unwrap();
    let (z4, pi) = z8.quotient(&n).unwrap();
    let sg4 = pullback_sorting(&pi, &sg8).unwrap();
    let m = z4.normal_subgroup(&[0, 2]).unwrap();
    let (_, tau) = z4.quotient(&m).unwrap();
    let sg2 = pullback_sorting(&tau, &sg4).unwrap();

    let sup8 = canonical_support(&sg8);
    let sup4 = canonical_support(&sg4);
    let sup2 = canonical_support(&sg2);

    let d_pi = dual_group_morphism(&pi, &sg8, &sup8, &sg4, &sup4).unwrap();
    let d_tau = dual_group_morphism(&tau, &sg4, &sup4, &sg2, &sup2).unwrap();
    let comp = pi.then(&tau).unwrap();
    let d_comp = dual_group_morphism(&comp, &sg8, &sup8, &sg2, &sup2).unwrap();
    for e in 0..d_tau.source.len() {
        assert_eq!(
            d_pi.map[d_tau.map[e] as usize],
            d_comp.map[e],
            "contravariance at element {e}"
        );
    }
    let g_tau = dual_system_embedding(&d_tau).unwrap();
    assert_eq!(g_tau.kernel().len(), 2);
    let g_comp = dual_system_embedding(&d_comp).unwrap();
    assert_eq!(g_comp.kernel().len(), 4);
    verdict(
        "4 contravariant functoriality",
        true,
        "dual of the composite equals the composite of duals; kernels of order 2 and 4",
    );
}

/// Criterion 5: the orbit interpretation agrees with the coset construction.
#[test]
fn criterion_5_interpretation_oracle() {
    let t0 = Instant::now();
    let bound = 4;
    for name in ["Z2", "Z4", "V4", "S3", "D4"] {
        let sg = standard_sorted_group(name).unwrap();
        let model = regular_model(&sg);
        let support = interp_support(&sg, bound);
        let report = check_interpretation(&model, &support, bound);
        assert!(report.passed(), "{name}: {report}");
        // the derived sorted group is the corpus one
        let derived = derived_sorted_group(&model, bound).unwrap().saturate_sorting();
        assert_eq!(derived, sg, "{name} derived sorting");
        // uniqueness of second components, per realizable degree
        for key in &support {
            let j = SortTuple::repeated("A", key.k).unwrap();
            let unique = check_unique_approx(&model, key.k, &j, bound).unwrap();
            assert!(unique.passed(), "{name} degree {}: {unique}", key.k);
        }
        // dcl vs primitivity, exhaustive over bounded tuples and all points
        let lemma = dcl_iff_primitive(&model, 3);
        assert!(lemma.passed(), "{name}: {lemma}");
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    verdict(
        "5 interpretation oracle",
        true,
        &format!("Z2, Z4, V4, S3, D4 regular models interpret exactly; {elapsed:?}"),
    );
}

/// Independent brute-force filter for the fiber product, written against raw
/// image arrays.
fn fiber_oracle(
    orders: (usize, usize, usize),
    ab_a: &[usize],
    ab_b: &[usize],
    ac_a: &[usize],
    ac_c: &[usize],
    bc_b: &[usize],
    bc_c: &[usize],
) -> Vec<(usize, usize, usize)> {
    let mut out = vec![];
    for s1 in 0..orders.0 {
        for s2 in 0..orders.1 {
            for s3 in 0..orders.2 {
                if ab_a[s1] == ac_a[s2] && ab_b[s1] == bc_b[s3] && ac_c[s2] == bc_c[s3] {
                    out.push((s1, s2, s3));
                }
            }
        }
    }
    out
}

/// Criterion 6: the fiber product equals brute force and is a subgroup.
#[test]
fn criterion_6_fiber_product() {
    let z2 = FiniteGroup::cyclic(2);
    let z4 = FiniteGroup::cyclic(4);
    let z8 = FiniteGroup::cyclic(8);
    let s3 = FiniteGroup::symmetric_3();
    let triv = FiniteGroup::cyclic(1);

    let onto_triv = |g: &FiniteGroup| GroupMap::new(g.clone(), triv.clone(), vec![0; g.order()]).unwrap();
    let mod_map = |g: &FiniteGroup, n: &[usize]| {
        let sub = g.normal_subgroup(n).unwrap();
        g.quotient(&sub).unwrap().1
    };

    // (instance name, six maps, expected order)
    let z4m2 = mod_map(&z4, &[0, 2]);
    let z8m4 = mod_map(&z8, &[0, 4]);
    let z8m2 = mod_map(&z8, &[0, 2, 4, 6]);
    let z4id = GroupMap::identity(&z4);
    let s3id = GroupMap::identity(&s3);
    let trivid = GroupMap::identity(&triv);
    let sign = mod_map(&s3, &[0, 3, 4]);
    let instances: Vec<(&str, [GroupMap; 6], usize)> = vec![
        (
            "trivial targets over Z2",
            [
                onto_triv(&z2),
                onto_triv(&z2),
                onto_triv(&z2),
                onto_triv(&z2),
                onto_triv(&z2),
                onto_triv(&z2),
            ],
            8,
        ),
        (
            "identity maps on Z4",
            [
                z4id.clone(),
                z4id.clone(),
                z4id.clone(),
                z4id.clone(),
                z4id.clone(),
                z4id.clone(),
            ],
            4,
        ),
        (
            "identity maps on S3",
            [
                s3id.clone(),
                s3id.clone(),
                s3id.clone(),
                s3id.clone(),
                s3id.clone(),
                s3id.clone(),
            ],
            6,
        ),
        (
            "trivial sources",
            [
                trivid.clone(),
                trivid.clone(),
                trivid.clone(),
                trivid.clone(),
                trivid.clone(),
                trivid.clone(),
            ],
            1,
        ),
        (
            "Z4 sources over mod-2 targets",
            [
                z4m2.clone(),
                z4m2.clone(),
                z4m2.clone(),
                z4m2.clone(),
                z4m2.clone(),
                z4m2.clone(),
            ],
            16,
        ),
        (
            "S3 sources over sign targets",
            [
                sign.clone(),
                sign.clone(),
                sign.clone(),
                sign.clone(),
                sign.clone(),
                sign.clone(),
            ],
            54,
        ),
        (
            "mixed Z8/Z4 chain",
            [
                z8m4.clone(),
                z8m2.clone(),
                z4id.clone(),
                z4m2.clone(),
                z4m2.clone(),
                z4m2.clone(),
            ],
            16,
        ),
    ];

    for (name, maps, expected) in &instances {
        let [ab_a, ab_b, ac_a, ac_c, bc_b, bc_c] = maps;
        let fiber = fiber_triple(ab_a, ab_b, ac_a, ac_c, bc_b, bc_c).unwrap();
        let oracle = fiber_oracle(
            (
                ab_a.source().order(),
                ac_a.source().order(),
                bc_b.source().order(),
            ),
            ab_a.images(),
            ab_b.images(),
            ac_a.images(),
            ac_c.images(),
            bc_b.images(),
            bc_c.images(),
        );
        assert_eq!(fiber.triples, oracle, "{name}");
        assert_eq!(fiber.order(), *expected, "{name}");
        assert!(fiber.is_subgroup(), "{name}");
    }
    verdict(
        "6 fiber product",
        true,
        &format!("{} instances equal brute force and are subgroups", instances.len()),
    );
}

/// Criterion 7: the ultraproduct map is an isomorphism at every principal
/// ultrafilter.
#[test]
fn criterion_7_principal_ultraproduct() {
    let lists: Vec<Vec<&str>> = vec![
        vec!["Z2"],
        vec!["Z2", "Z4"],
        vec!["Z4", "S3"],
        vec!["Z2", "Z4", "S3"],
        vec!["S3", "S3", "Z2"],
    ];
    let mut cases = 0;
    for names in &lists {
        let factors: Vec<_> = names
            .iter()
            .map(|n| standard_sorted_group(n).unwrap())
            .collect();
        for i0 in 0..factors.len() {
            let support = canonical_support(&factors[i0]);
            let report = principal_ultraproduct(&factors, i0, &support).unwrap();
            assert!(report.passed(), "{names:?} at {i0}: {report}");
            cases += 1;
        }
    }
    verdict(
        "7 principal ultraproduct",
        true,
        &format!("{cases} factor-list/index combinations are isomorphisms"),
    );
}

/// Rebuilds a system from its parts with an edit applied.
struct Parts {
    sorts: Vec<SortKey>,
    elements: Vec<(usize, String)>,
    leq: Vec<(u32, u32)>,
    c: Vec<(u32, u32)>,
    p: Vec<(u32, u32, u32)>,
}

impl Parts {
    fn of(s: &CompleteSystem) -> Parts {
        Parts {
            sorts: s.sorts().to_vec(),
            elements: (0..s.len() as u32)
                .map(|e| (s.sort_of(e), s.label(e).to_string()))
                .collect(),
            leq: s.leq_pairs().copied().collect(),
            c: s.c_pairs().copied().collect(),
            p: s.p_triples().copied().collect(),
        }
    }

    fn build(self) -> CompleteSystem {
        CompleteSystem::new(self.sorts, self.elements, self.leq, self.c, self.p).unwrap()
    }

    fn find(&self, label: &str) -> u32 {
        self.elements
            .iter()
            .position(|(_, l)| l == label)
            .unwrap_or_else(|| panic!("no element {label}")) as u32
    }

    /// Removes one element and every relation tuple touching it.
    fn remove_element(mut self, id: u32) -> Parts {
        self.elements.remove(id as usize);
        let shift = |x: u32| if x > id { x - 1 } else { x };
        self.leq.retain(|&(a, b)| a != id && b != id);
        self.c.retain(|&(a, b)| a != id && b != id);
        self.p.retain(|&(a, b, c)| a != id && b != id && c != id);
        self.leq = self.leq.iter().map(|&(a, b)| (shift(a), shift(b))).collect();
        self.c = self.c.iter().map(|&(a, b)| (shift(a), shift(b))).collect();
        self.p = self
            .p
            .iter()
            .map(|&(a, b, c)| (shift(a), shift(b), shift(c)))
            .collect();
        self
    }
}

/// Criterion 8: seeded single-edit mutations are caught, scheme by scheme.
#[test]
fn criterion_8_mutation_sensitivity() {
    let mut seeded = 0;

    // sorted-group condition (3): drop the set-code generator the chain
    // condition demands
    {
        let sg = standard_sorted_group("Z4").unwrap();
        let mut families = sg.families().to_vec();
        let idx = sg
            .subgroups()
            .iter()
            .position(|n| n.elements() == [0, 2])
            .unwrap();
        let kept: Vec<_> = families[idx]
            .generators()
            .iter()
            .filter(|g| g.depth() == 0)
            .cloned()
            .collect();
        families[idx] = sorted_systems::sorts::SortFamily::from_generators(kept).unwrap();
        let mutant = sg.with_sorting(families).unwrap();
        let report = mutant.check_sorted_axioms();
        let entry = report.entry("subgroup-condition").unwrap();
        assert_eq!(entry.status, CheckStatus::Fail, "{report}");
        assert!(entry.witnesses.iter().any(|w| w.contains("{0,2}")));
        seeded += 1;
    }

    // sorted-group condition (4): meet subgroup loses the base generator
    {
        let sg = standard_sorted_group("V4").unwrap();
        let mut families = sg.families().to_vec();
        let idx = sg
            .subgroups()
            .iter()
            .position(|n| n.elements() == [0])
            .unwrap();
        let kept: Vec<_> = families[idx]
            .generators()
            .iter()
            .filter(|g| g.depth() > 0)
            .cloned()
            .collect();
        families[idx] = sorted_systems::sorts::SortFamily::from_generators(kept).unwrap();
        let mutant = sg.with_sorting(families).unwrap();
        let report = mutant.check_sorted_axioms();
        let entry = report.entry("intersection-condition").unwrap();
        assert_eq!(entry.status, CheckStatus::Fail, "{report}");
        assert!(entry
            .witnesses
            .iter()
            .any(|w| w.contains("{0,1}") && w.contains("{0,2}")));
        seeded += 1;
    }

    let z4_system = || {
        let sg = standard_sorted_group("Z4").unwrap();
        system_of_group(&sg, &canonical_support(&sg)).unwrap()
    };

    // item 1 (order): drop one reflexive pair
    {
        let base = z4_system();
        let mut parts = Parts::of(&base);
        let target = parts.find("g0·N0@m(4;A)");
        parts.leq.retain(|&(a, b)| (a, b) != (target, target));
        let report = parts.build().check_axioms();
        let entry = report.entry("order").unwrap();
        assert_eq!(entry.status, CheckStatus::Fail);
        assert!(entry.witnesses.iter().any(|w| w.contains("g0·N0@m(4;A)")));
        seeded += 1;
    }

    // item 2 (extending tuples): delete the top coset's copy in a wider sort
    {
        let base = z4_system();
        let parts = Parts::of(&base);
        let victim = parts.find("g0·N2@m(4;A,A)");
        let report = parts.remove_element(victim).build().check_axioms();
        let entry = report.entry("extending-tuples").unwrap();
        assert_eq!(entry.status, CheckStatus::Fail, "{report}");
        assert!(entry.witnesses.iter().any(|w| w.contains("m(4;A,A)")));
        seeded += 1;
    }

    // item 3 (intersection/inf): a fresh element below two incomparable
    // classes with nothing beneath it
    {
        let sg = standard_sorted_group("V4").unwrap();
        let base = system_of_group(&sg, &canonical_support(&sg)).unwrap();
        let mut parts = Parts::of(&base);
        let x = parts.find("g0·N1@m(2;A)");
        let y = parts.find("g0·N2@m(2;A)");
        let sort_4a = base
            .sort_index(&SortKey::new(4, SortTuple::single("A")))
            .unwrap();
        let z = parts.elements.len() as u32;
        parts.elements.push((sort_4a, "seeded-z".into()));
        parts.leq.push((z, z));
        // below x, y and transitively everything above them
        let mut ups: Vec<u32> = vec![x, y];
        for &(a, b) in &Parts::of(&base).leq {
            if a == x || a == y {
                ups.push(b);
            }
        }
        ups.sort_unstable();
        ups.dedup();
        for u in ups {
            parts.leq.push((z, u));
        }
        parts.p.push((z, z, z));
        let report = parts.build().check_axioms();
        let inter = report.entry("intersection").unwrap();
        let inf = report.entry("inf").unwrap();
        assert!(
            inter.status == CheckStatus::Fail && inf.status == CheckStatus::Fail,
            "{report}"
        );
        assert!(inter.witnesses.iter().any(|w| w.contains("seeded-z")));
        seeded += 1;
    }

    // item 4 (modular law): a pentagon inserted below one order-2 class
    {
        let sg = standard_sorted_group("V4").unwrap();
        let base = system_of_group(&sg, &canonical_support(&sg)).unwrap();
        let mut parts = Parts::of(&base);
        let sort_4a = base
            .sort_index(&SortKey::new(4, SortTuple::single("A")))
            .unwrap();
        let w = parts.elements.len() as u32;
        parts.elements.push((sort_4a, "seeded-w".into()));
        parts.leq.push((w, w));
        parts.p.push((w, w, w));
        // bottom class below w, w below the N1 chain and the top
        for e in 0..base.len() as u32 {
            let label = base.label(e);
            if label.contains("·N0@") {
                parts.leq.push((e, w));
            }
            if label.contains("·N1@") || label.contains("·N4@") {
                parts.leq.push((w, e));
            }
        }
        let report = parts.build().check_axioms();
        let entry = report.entry("modular-law").unwrap();
        assert_eq!(entry.status, CheckStatus::Fail, "{report}");
        assert!(entry.witnesses.iter().any(|w| w.contains("seeded-w")));
        seeded += 1;
    }

    // item 5 (group structure): redirect one product triple
    {
        let base = z4_system();
        let mut parts = Parts::of(&base);
        let a = parts.find("g1·N0@m(4;A)");
        let b = parts.find("g2·N0@m(4;A)");
        let good = parts.find("g3·N0@m(4;A)");
        let bad = parts.find("g0·N0@m(4;A)");
        parts.p.retain(|&t| t != (a, b, good));
        parts.p.push((a, b, bad));
        let report = parts.build().check_axioms();
        let entry = report.entry("group-structure").unwrap();
        assert_eq!(entry.status, CheckStatus::Fail, "{report}");
        assert!(entry.witnesses.iter().any(|w| w.contains("N0@m(4;A)")));
        seeded += 1;
    }

    // item 6 (projections): drop one C-pair
    {
        let base = z4_system();
        let mut parts = Parts::of(&base);
        let from = parts.find("g1·N0@m(4;A)");
        let to = parts.find("g1·N1@m(4;A)");
        assert!(parts.c.contains(&(from, to)));
        parts.c.retain(|&t| t != (from, to));
        let report = parts.build().check_axioms();
        let entry = report.entry("projections").unwrap();
        assert_eq!(entry.status, CheckStatus::Fail, "{report}");
        assert!(entry.witnesses.iter().any(|w| w.contains("N0@m(4;A)")));
        seeded += 1;
    }

    // item 7 (normal subgroups): delete the named witness coset
    {
        let base = z4_system();
        let parts = Parts::of(&base);
        let victim = parts.find("g0·N1@m(4;s1(A),s2(A),s3(A),s4(A))");
        let report = parts.remove_element(victim).build().check_axioms();
        let entry = report.entry("normal-subgroups").unwrap();
        assert_eq!(entry.status, CheckStatus::Fail, "{report}");
        assert!(entry
            .witnesses
            .iter()
            .any(|w| w.contains("s1(A)") && w.contains("witnesses")));
        seeded += 1;
    }

    // item 8 (hidden axiom): clone the index-2 class as a parallel class
    // with the same kernel
    {
        let base = z4_system();
        let mut parts = Parts::of(&base);
        let sort_2a = base
            .sort_index(&SortKey::new(2, SortTuple::single("A")))
            .unwrap();
        let orig: Vec<u32> = base
            .elements_of_sort(sort_2a)
            .into_iter()
            .filter(|&e| base.label(e).contains("·N1@"))
            .collect();
        assert_eq!(orig.len(), 2);
        // the whole original class, across every sort copy
        let orig_class: Vec<u32> = (0..base.len() as u32)
            .filter(|&e| base.label(e).contains("·N1@"))
            .collect();
        let fresh: Vec<u32> = (0..orig.len())
            .map(|i| parts.elements.len() as u32 + i as u32)
            .collect();
        for (i, &f) in fresh.iter().enumerate() {
            parts
                .elements
                .push((sort_2a, format!("seeded-clone{i}")));
            let o = orig[i];
            // order and C: same ups and downs as the original, excluding the
            // original class entirely; mutual order among the clones
            for &(a, b) in &Parts::of(&base).leq {
                if a == o && !orig_class.contains(&b) {
                    parts.leq.push((f, b));
                }
                if b == o && !orig_class.contains(&a) {
                    parts.leq.push((a, f));
                }
            }
            for &fj in &fresh {
                parts.leq.push((f, fj));
                parts.leq.push((fj, f));
            }
            for &(a, b) in &Parts::of(&base).c {
                if b == o && !orig_class.contains(&a) {
                    parts.c.push((a, f));
                }
                if a == o && !orig_class.contains(&b) {
                    parts.c.push((f, b));
                }
            }
            parts.c.push((f, f));
        }
        // products among the clones mirror the originals
        for (i, &oi) in orig.iter().enumerate() {
            for (j, &oj) in orig.iter().enumerate() {
                for (k, &ok) in orig.iter().enumerate() {
                    if base.p_rel(oi, oj, ok) {
                        parts.p.push((fresh[i], fresh[j], fresh[k]));
                    }
                }
            }
        }
        let report = parts.build().check_axioms();
        let entry = report.entry("hidden-axiom").unwrap();
        assert_eq!(entry.status, CheckStatus::Fail, "{report}");
        assert!(entry.witnesses.iter().any(|w| w.contains("seeded-clone")));
        seeded += 1;
    }

    // the checker also flags a seeded round-trip mutation: dropping a
    // C-pair breaks the beta comparison
    {
        let sg = standard_sorted_group("Z4").unwrap();
        let support = canonical_support(&sg);
        let gs = group_system(&sg, &support).unwrap();
        let clean = check_alpha_beta(&sg, &support);
        assert!(clean.passed());
        let mut parts = Parts::of(&gs.system);
        let from = parts.find("g1·N0@m(4;A)");
        let to = parts.find("g1·N1@m(4;A)");
        parts.c.retain(|&t| t != (from, to));
        let mutated = parts.build();
        let mut mutated_gs = gs.clone();
        mutated_gs.system = mutated;
        let report = check_alpha_beta_with(&sg, &mutated_gs);
        assert!(!report.passed(), "{report}");
        seeded += 1;
    }

    verdict(
        "8 mutation sensitivity",
        true,
        &format!("{seeded} seeded single-edit mutants all flagged with witnesses"),
    );
}

/// The named corpus groups exist and validate; exercised here so acceptance
/// failures elsewhere cannot hide a broken corpus.
#[test]
fn corpus_is_well_formed() {
    for name in sorted_systems::corpus::corpus_names() {
        let g = group_by_name(&name).unwrap();
        assert!(g.validate().passed(), "{name}");
        assert!(g.order() <= 16);
    }
}
