//! Sort terms, sort tuples and support-generated sort families.
//!
//! A sort term is either a named base sort or an opaque "set code" sort
//! `s_n(J)` standing for codes of n-element sets drawn from the tuple `J`.
//! Families of tuples are stored by a generator antichain of supports: a
//! tuple belongs to the family iff some generator is contained in its
//! support. This makes the family upward closed under supports and
//! invariant under permutation and repetition of components, which is
//! exactly the closure the sorted-group conditions force.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SortError {
    #[error("sort tuples must be nonempty")]
    EmptyTuple,
    #[error("set-code arity must be at least 1")]
    ZeroArity,
    #[error("j_star_sub requires k >= 1")]
    ZeroIndexBound,
}

/// A single sort of the ambient many-sorted language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SortTerm {
    /// A named base sort.
    Base(String),
    /// The sort of codes for sets of `arity` elements from the tuple `of`.
    SetCode { arity: usize, of: SortTuple },
}

impl SortTerm {
    pub fn base(name: &str) -> Self {
        SortTerm::Base(name.to_string())
    }

    pub fn set_code(arity: usize, of: SortTuple) -> Result<Self, SortError> {
        if arity == 0 {
            return Err(SortError::ZeroArity);
        }
        Ok(SortTerm::SetCode { arity, of })
    }

    /// Nesting depth of set codes: base sorts have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            SortTerm::Base(_) => 0,
            SortTerm::SetCode { of, .. } => 1 + of.depth(),
        }
    }
}

impl fmt::Display for SortTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortTerm::Base(name) => write!(f, "{name}"),
            SortTerm::SetCode { arity, of } => write!(f, "s{arity}({of})"),
        }
    }
}

impl Serialize for SortTerm {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            SortTerm::Base(name) => ser.serialize_str(name),
            SortTerm::SetCode { arity, of } => {
                use serde::ser::SerializeStruct;
                let mut s = ser.serialize_struct("SetCode", 2)?;
                s.serialize_field("set", arity)?;
                s.serialize_field("of", &of.terms().to_vec())?;
                s.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SortTermRepr {
    Base(String),
    SetCode { set: usize, of: Vec<SortTermRepr> },
}

impl SortTermRepr {
    fn build<E: serde::de::Error>(self) -> Result<SortTerm, E> {
        match self {
            SortTermRepr::Base(name) => {
                if name.is_empty() {
                    return Err(E::custom("base sort name must be nonempty"));
                }
                Ok(SortTerm::Base(name))
            }
            SortTermRepr::SetCode { set, of } => {
                let terms = of
                    .into_iter()
                    .map(|t| t.build())
                    .collect::<Result<Vec<_>, E>>()?;
                let tuple = SortTuple::new(terms).map_err(E::custom)?;
                SortTerm::set_code(set, tuple).map_err(E::custom)
            }
        }
    }
}

impl<'de> Deserialize<'de> for SortTerm {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        SortTermRepr::deserialize(de)?.build()
    }
}

/// A finite nonempty tuple of sort terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SortTuple(Vec<SortTerm>);

impl SortTuple {
    pub fn new(terms: Vec<SortTerm>) -> Result<Self, SortError> {
        if terms.is_empty() {
            return Err(SortError::EmptyTuple);
        }
        Ok(SortTuple(terms))
    }

    /// Tuple with a single base sort, a common corpus case.
    pub fn single(name: &str) -> Self {
        SortTuple(vec![SortTerm::base(name)])
    }

    /// Tuple repeating one base sort `n` times.
    pub fn repeated(name: &str, n: usize) -> Result<Self, SortError> {
        if n == 0 {
            return Err(SortError::EmptyTuple);
        }
        Ok(SortTuple(vec![SortTerm::base(name); n]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn terms(&self) -> &[SortTerm] {
        &self.0
    }

    /// Greatest set-code nesting depth among the components.
    pub fn depth(&self) -> usize {
        self.0.iter().map(SortTerm::depth).max().unwrap_or(0)
    }

    /// True iff `self` is an order-preserving subsequence of `other`.
    pub fn is_subtuple_of(&self, other: &SortTuple) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|t| it.any(|u| u == t))
    }

    /// True iff `other` is a reordering of `self`.
    pub fn is_permutation_of(&self, other: &SortTuple) -> bool {
        if self.0.len() != other.0.len() {
            return false;
        }
        let mut a = self.0.clone();
        let mut b = other.0.clone();
        a.sort();
        b.sort();
        a == b
    }
}

impl fmt::Display for SortTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for SortTuple {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let terms = Vec::<SortTerm>::deserialize(de)?;
        SortTuple::new(terms).map_err(D::Error::custom)
    }
}

/// The set of distinct components of a tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Support(BTreeSet<SortTerm>);

impl Support {
    pub fn from_terms<I: IntoIterator<Item = SortTerm>>(terms: I) -> Self {
        Support(terms.into_iter().collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = &SortTerm> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Support) -> Support {
        Support(self.0.union(&other.0).cloned().collect())
    }

    /// Canonical tuple listing the support's terms in order.
    pub fn as_tuple(&self) -> Result<SortTuple, SortError> {
        SortTuple::new(self.0.iter().cloned().collect())
    }

    pub fn depth(&self) -> usize {
        self.0.iter().map(SortTerm::depth).max().unwrap_or(0)
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// `||J||`: the set of distinct components of `J`.
pub fn support(j: &SortTuple) -> Support {
    Support::from_terms(j.terms().iter().cloned())
}

/// Membership of `jp` in the radical of `j`: the support of `jp` must
/// contain the support of `j`.
pub fn in_sqrt(jp: &SortTuple, j: &SortTuple) -> bool {
    support(j).is_subset(&support(jp))
}

/// Concatenation, the combinator backing the intersection condition.
pub fn j_star_cap(j1: &SortTuple, j2: &SortTuple) -> SortTuple {
    let mut terms = j1.terms().to_vec();
    terms.extend_from_slice(j2.terms());
    SortTuple(terms)
}

/// The tuple `(s_1(J), s_2(J), ..., s_k(J))` backing the subgroup condition.
pub fn j_star_sub(k: usize, j: &SortTuple) -> Result<SortTuple, SortError> {
    if k == 0 {
        return Err(SortError::ZeroIndexBound);
    }
    let terms = (1..=k)
        .map(|n| SortTerm::SetCode {
            arity: n,
            of: j.clone(),
        })
        .collect();
    Ok(SortTuple(terms))
}

/// A support-upward-closed family of sort tuples, kept as a generator
/// antichain. Empty generators are rejected: they would make every tuple
/// a member, which the radical closure never produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SortFamily {
    generators: Vec<Support>,
}

impl SortFamily {
    pub fn empty() -> Self {
        SortFamily { generators: vec![] }
    }

    pub fn from_generators<I: IntoIterator<Item = Support>>(gens: I) -> Result<Self, SortError> {
        let mut fam = SortFamily::empty();
        for g in gens {
            if g.is_empty() {
                return Err(SortError::EmptyTuple);
            }
            fam.insert_generator(g);
        }
        Ok(fam)
    }

    pub fn generators(&self) -> &[Support] {
        &self.generators
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `J` belongs to the family iff some generator sits inside `||J||`.
    pub fn contains(&self, j: &SortTuple) -> bool {
        let sup = support(j);
        self.generators.iter().any(|g| g.is_subset(&sup))
    }

    pub fn contains_support(&self, sup: &Support) -> bool {
        self.generators.iter().any(|g| g.is_subset(sup))
    }

    /// Family extended by the support-upward closure of `J`.
    pub fn add(&self, j: &SortTuple) -> SortFamily {
        let mut next = self.clone();
        next.insert_generator(support(j));
        next
    }

    fn insert_generator(&mut self, g: Support) {
        if self.generators.iter().any(|h| h.is_subset(&g)) {
            return; // subsumed by a weaker generator
        }
        self.generators.retain(|h| !g.is_subset(h));
        self.generators.push(g);
        self.generators.sort();
    }
}

impl fmt::Display for SortFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

/// Convenience for `family_contains` in operation terms.
pub fn family_contains(family: &SortFamily, j: &SortTuple) -> bool {
    family.contains(j)
}

/// Convenience for `family_add` in operation terms.
pub fn family_add(family: &SortFamily, j: &SortTuple) -> SortFamily {
    family.add(j)
}
