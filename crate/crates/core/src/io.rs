//! File formats: groups, sorted groups, systems and action models as JSON,
//! plus the CLI support-specification syntax. Emission is canonical: fixed
//! field order, canonically ordered collections, so identical inputs give
//! byte-identical output.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complete_system::{CompleteSystem, SortKey, SystemError};
use crate::groups::{FiniteGroup, GroupError, GroupMap};
use crate::interpretation::{GaloisActionModel, InterpError, Orbit};
use crate::sorted_group::{SortedFiniteGroup, SortedGroupError};
use crate::sorts::{SortError, SortFamily, SortTerm, SortTuple, Support};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid file: {0}")]
    Validation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    SortedGroup(#[from] SortedGroupError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error(transparent)]
    Model(#[from] InterpError),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
}

pub fn group_to_json(g: &FiniteGroup) -> String {
    serde_json::to_string_pretty(&GroupFile {
        order: g.order(),
        cayley: g.table().to_vec(),
    })
    .expect("serializable")
}

pub fn group_from_json(text: &str) -> Result<FiniteGroup, IoError> {
    let file: GroupFile = serde_json::from_str(text)?;
    if file.cayley.len() != file.order {
        return Err(IoError::Validation(format!(
            "order {} does not match table size {}",
            file.order,
            file.cayley.len()
        )));
    }
    Ok(FiniteGroup::from_table(file.cayley)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SortingEntry {
    pub subgroup: Vec<usize>,
    pub generators: Vec<Vec<SortTerm>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SortedGroupFile {
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
    pub sorting: Vec<SortingEntry>,
}

pub fn sorted_group_to_json(sg: &SortedFiniteGroup) -> String {
    let sorting = sg
        .subgroups()
        .iter()
        .zip(sg.families())
        .map(|(n, fam)| SortingEntry {
            subgroup: n.elements().to_vec(),
            generators: fam
                .generators()
                .iter()
                .map(|g| g.terms().cloned().collect())
                .collect(),
        })
        .collect();
    serde_json::to_string_pretty(&SortedGroupFile {
        order: sg.group().order(),
        cayley: sg.group().table().to_vec(),
        sorting,
    })
    .expect("serializable")
}

pub fn sorted_group_from_json(text: &str) -> Result<SortedFiniteGroup, IoError> {
    let file: SortedGroupFile = serde_json::from_str(text)?;
    let group = FiniteGroup::from_table(file.cayley)?;
    let subgroups = group.normal_subgroups();
    let mut families: Vec<Option<SortFamily>> = vec![None; subgroups.len()];
    for entry in file.sorting {
        let mut elems = entry.subgroup.clone();
        elems.sort_unstable();
        let idx = subgroups
            .iter()
            .position(|n| n.elements() == elems.as_slice())
            .ok_or_else(|| {
                IoError::Validation(format!("{elems:?} is not a normal subgroup"))
            })?;
        let gens = entry
            .generators
            .into_iter()
            .map(|terms| {
                if terms.is_empty() {
                    Err(IoError::Validation("empty generator".into()))
                } else {
                    Ok(Support::from_terms(terms))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if families[idx].is_some() {
            return Err(IoError::Validation(format!(
                "duplicate sorting entry for {elems:?}"
            )));
        }
        families[idx] = Some(SortFamily::from_generators(gens)?);
    }
    let families: Vec<SortFamily> = families
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            f.ok_or_else(|| {
                IoError::Validation(format!("missing sorting entry for {}", subgroups[i]))
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(SortedFiniteGroup::new(group, families)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SortDecl {
    pub k: usize,
    #[serde(rename = "J")]
    pub j: Vec<SortTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ElementDecl {
    pub id: usize,
    pub sort: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub sorts: Vec<SortDecl>,
    pub elements: Vec<ElementDecl>,
    pub leq: Vec<(u32, u32)>,
    pub c: Vec<(u32, u32)>,
    pub p: Vec<(u32, u32, u32)>,
}

pub fn system_to_json(s: &CompleteSystem) -> String {
    let sorts = s
        .sorts()
        .iter()
        .map(|key| SortDecl {
            k: key.k,
            j: key.tuple.terms().to_vec(),
        })
        .collect();
    let elements = (0..s.len() as u32)
        .map(|e| ElementDecl {
            id: e as usize,
            sort: s.sort_of(e),
            label: Some(s.label(e).to_string()),
        })
        .collect();
    serde_json::to_string_pretty(&SystemFile {
        sorts,
        elements,
        leq: s.leq_pairs().copied().collect(),
        c: s.c_pairs().copied().collect(),
        p: s.p_triples().copied().collect(),
    })
    .expect("serializable")
}

pub fn system_from_json(text: &str) -> Result<CompleteSystem, IoError> {
    let file: SystemFile = serde_json::from_str(text)?;
    let sorts = file
        .sorts
        .into_iter()
        .map(|d| Ok(SortKey::new(d.k, SortTuple::new(d.j)?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    let mut elements: Vec<Option<(usize, String)>> = vec![None; file.elements.len()];
    for decl in &file.elements {
        if decl.id >= elements.len() || elements[decl.id].is_some() {
            return Err(IoError::Validation(format!(
                "element ids must be dense and unique (id {})",
                decl.id
            )));
        }
        let label = decl.label.clone().unwrap_or_else(|| format!("e{}", decl.id));
        elements[decl.id] = Some((decl.sort, label));
    }
    let elements: Vec<(usize, String)> = elements
        .into_iter()
        .map(|e| e.ok_or_else(|| IoError::Validation("gap in element ids".into())))
        .collect::<Result<_, _>>()?;
    Ok(CompleteSystem::new(
        sorts, elements, file.leq, file.c, file.p,
    )?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OrbitDecl {
    pub sort: SortTerm,
    pub size: usize,
    pub action: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub group: GroupFile,
    pub orbits: Vec<OrbitDecl>,
}

pub fn model_to_json(m: &GaloisActionModel) -> String {
    serde_json::to_string_pretty(&ModelFile {
        group: GroupFile {
            order: m.gamma.order(),
            cayley: m.gamma.table().to_vec(),
        },
        orbits: m
            .orbits
            .iter()
            .map(|o| OrbitDecl {
                sort: o.sort.clone(),
                size: o.size(),
                action: o.action.clone(),
            })
            .collect(),
    })
    .expect("serializable")
}

pub fn model_from_json(text: &str) -> Result<GaloisActionModel, IoError> {
    let file: ModelFile = serde_json::from_str(text)?;
    let gamma = FiniteGroup::from_table(file.group.cayley)?;
    let orbits = file
        .orbits
        .into_iter()
        .map(|o| {
            if o.action.first().map(|r| r.len()).unwrap_or(0) != o.size {
                return Err(IoError::Validation(format!(
                    "orbit size {} does not match action rows",
                    o.size
                )));
            }
            Ok(Orbit {
                sort: o.sort,
                action: o.action,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GaloisActionModel::new(gamma, orbits)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FiberFile {
    pub g_ab: GroupFile,
    pub g_ac: GroupFile,
    pub g_bc: GroupFile,
    pub g_a: GroupFile,
    pub g_b: GroupFile,
    pub g_c: GroupFile,
    pub ab_a: Vec<usize>,
    pub ab_b: Vec<usize>,
    pub ac_a: Vec<usize>,
    pub ac_c: Vec<usize>,
    pub bc_b: Vec<usize>,
    pub bc_c: Vec<usize>,
}

/// The six epimorphisms of a fiber-product instance.
pub struct FiberMaps {
    pub ab_a: GroupMap,
    pub ab_b: GroupMap,
    pub ac_a: GroupMap,
    pub ac_c: GroupMap,
    pub bc_b: GroupMap,
    pub bc_c: GroupMap,
}

pub fn fiber_from_json(text: &str) -> Result<FiberMaps, IoError> {
    let file: FiberFile = serde_json::from_str(text)?;
    let build = |gf: GroupFile| FiniteGroup::from_table(gf.cayley);
    let g_ab = build(file.g_ab)?;
    let g_ac = build(file.g_ac)?;
    let g_bc = build(file.g_bc)?;
    let g_a = build(file.g_a)?;
    let g_b = build(file.g_b)?;
    let g_c = build(file.g_c)?;
    Ok(FiberMaps {
        ab_a: GroupMap::new(g_ab.clone(), g_a.clone(), file.ab_a)?,
        ab_b: GroupMap::new(g_ab, g_b.clone(), file.ab_b)?,
        ac_a: GroupMap::new(g_ac.clone(), g_a, file.ac_a)?,
        ac_c: GroupMap::new(g_ac, g_c.clone(), file.ac_c)?,
        bc_b: GroupMap::new(g_bc.clone(), g_b, file.bc_b)?,
        bc_c: GroupMap::new(g_bc, g_c, file.bc_c)?,
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UltraproductFile {
    pub factors: Vec<SortedGroupFile>,
}

pub fn ultraproduct_from_json(text: &str) -> Result<Vec<SortedFiniteGroup>, IoError> {
    let file: UltraproductFile = serde_json::from_str(text)?;
    file.factors
        .into_iter()
        .map(|f| sorted_group_from_json(&serde_json::to_string(&f)?))
        .collect()
}

/// Parses `k:J;k:J` with comma-separated base sort names, e.g. `2:A;4:A,A`.
pub fn parse_support(spec: &str) -> Result<Vec<SortKey>, IoError> {
    let mut out = vec![];
    for part in spec.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, names) = part
            .split_once(':')
            .ok_or_else(|| IoError::Validation(format!("bad support item {part:?}")))?;
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| IoError::Validation(format!("bad k in {part:?}")))?;
        if k == 0 {
            return Err(IoError::Validation("k must be positive".into()));
        }
        let terms: Vec<SortTerm> = names
            .split(',')
            .map(|n| n.trim())
            .filter(|n| !n.is_empty())
            .map(SortTerm::base)
            .collect();
        let tuple = SortTuple::new(terms)
            .map_err(|_| IoError::Validation(format!("empty tuple in {part:?}")))?;
        out.push(SortKey::new(k, tuple));
    }
    if out.is_empty() {
        return Err(IoError::Validation("support spec is empty".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn group_round_trip_is_byte_exact() {
        for name in corpus::corpus_names() {
            let g = corpus::group_by_name(&name).unwrap();
            let json = group_to_json(&g);
            let back = group_from_json(&json).unwrap();
            assert_eq!(back, g);
            assert_eq!(group_to_json(&back), json, "{name}");
        }
    }

    #[test]
    fn sorted_group_round_trip_is_byte_exact() {
        let sg = corpus::standard_sorted_group("Z4").unwrap();
        let json = sorted_group_to_json(&sg);
        let back = sorted_group_from_json(&json).unwrap();
        assert_eq!(back, sg);
        assert_eq!(sorted_group_to_json(&back), json);
    }

    #[test]
    fn system_round_trip_is_byte_exact() {
        let s = corpus::hidden_axiom_example(4).unwrap();
        let json = system_to_json(&s);
        let back = system_from_json(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(system_to_json(&back), json);
    }

    #[test]
    fn model_round_trip_is_byte_exact() {
        let sg = corpus::standard_sorted_group("S3").unwrap();
        let m = corpus::regular_model(&sg);
        let json = model_to_json(&m);
        let back = model_from_json(&json).unwrap();
        assert_eq!(model_to_json(&back), json);
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(group_from_json("{").is_err());
        assert!(group_from_json(r#"{"order": 2, "cayley": [[0,1]]}"#).is_err());
        assert!(system_from_json(r#"{"sorts": [], "elements": [], "leq": [[0,1]], "c": [], "p": []}"#).is_err());
    }

    #[test]
    fn support_spec_parses() {
        let sup = parse_support("2:A;4:A,A").unwrap();
        assert_eq!(sup.len(), 2);
        assert_eq!(sup[0].k, 2);
        assert_eq!(sup[1].tuple.len(), 2);
        assert!(parse_support("").is_err());
        assert!(parse_support("0:A").is_err());
        assert!(parse_support("x").is_err());
    }
}
