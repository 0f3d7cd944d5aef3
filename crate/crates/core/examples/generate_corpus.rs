//! Regenerates the data files under `corpus/` from the builders.

use std::fs;

use sorted_systems::corpus::*;
use sorted_systems::groups::FiniteGroup;
use sorted_systems::io::*;

fn main() {
    fs::create_dir_all("corpus").unwrap();
    // plain group files
    for name in ["Z2", "Z4", "S3"] {
        let g = group_by_name(name).unwrap();
        fs::write(format!("corpus/{}.group.json", name.to_lowercase()), group_to_json(&g) + "\n").unwrap();
    }
    // sorted group file
    let sg = standard_sorted_group("Z4").unwrap();
    fs::write("corpus/z4.sorted.json", sorted_group_to_json(&sg) + "\n").unwrap();
    // the counterexample system
    let s = hidden_axiom_example(4).unwrap();
    fs::write("corpus/hidden.system.json", system_to_json(&s) + "\n").unwrap();
    // a coset system of Z4 (canonical support)
    let sys = sorted_systems::duality::system_of_group(&sg, &canonical_support(&sg)).unwrap();
    fs::write("corpus/z4.system.json", system_to_json(&sys) + "\n").unwrap();
    // regular action model of Z4
    let model = regular_model(&sg);
    fs::write("corpus/z4.model.json", model_to_json(&model) + "\n").unwrap();
    // fiber instance: three copies of Z4 restricting to Z2 three ways
    let z4 = FiniteGroup::cyclic(4);
    let n = z4.normal_subgroup(&[0, 2]).unwrap();
    let (z2, pi) = z4.quotient(&n).unwrap();
    let file = FiberFile {
        g_ab: GroupFile { order: 4, cayley: z4.table().to_vec() },
        g_ac: GroupFile { order: 4, cayley: z4.table().to_vec() },
        g_bc: GroupFile { order: 4, cayley: z4.table().to_vec() },
        g_a: GroupFile { order: 2, cayley: z2.table().to_vec() },
        g_b: GroupFile { order: 2, cayley: z2.table().to_vec() },
        g_c: GroupFile { order: 2, cayley: z2.table().to_vec() },
        ab_a: pi.images().to_vec(),
        ab_b: pi.images().to_vec(),
        ac_a: pi.images().to_vec(),
        ac_c: pi.images().to_vec(),
        bc_b: pi.images().to_vec(),
        bc_c: pi.images().to_vec(),
    };
    fs::write("corpus/z4_mod2.fiber.json", serde_json::to_string_pretty(&file).unwrap() + "\n").unwrap();
    // ultraproduct factors Z2, Z4, S3
    let factors = UltraproductFile {
        factors: ["Z2", "Z4", "S3"]
            .iter()
            .map(|n| {
                let sg = standard_sorted_group(n).unwrap();
                serde_json::from_str::<SortedGroupFile>(&sorted_group_to_json(&sg)).unwrap()
            })
            .collect(),
    };
    fs::write("corpus/z2z4s3.ultra.json", serde_json::to_string_pretty(&factors).unwrap() + "\n").unwrap();
    println!("corpus files written");
}
