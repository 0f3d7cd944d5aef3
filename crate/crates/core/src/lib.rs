//! Finite sorted groups, sorted complete systems, and the duality between
//! them.
//!
//! The crate works entirely with finite data: groups are Cayley tables,
//! sorted groups carry a family of sort supports per normal subgroup, and
//! complete systems are explicit multi-sorted relational structures. On top
//! of those sit the two functor-style constructions (`system_of_group`,
//! `group_of_system`), the canonical comparison maps between a structure and
//! its double dual, an orbit-based Galois action model with the
//! interpretation machinery, and brute-force cross-checks for all of it.
//!
//! ```
//! use sorted_systems::complete_system::item_status;
//! use sorted_systems::report::CheckStatus;
//! use sorted_systems::{corpus, duality};
//!
//! // the reference structure that separates the kernel axiom from the rest
//! let system = corpus::hidden_axiom_example(4).unwrap();
//! let report = system.check_axioms();
//! assert_eq!(item_status(&report, 7), CheckStatus::Pass);
//! assert_eq!(item_status(&report, 8), CheckStatus::Fail);
//!
//! // its class-group limit is cyclic of order four
//! let limit = duality::group_of_system(&system).unwrap();
//! assert_eq!(limit.group.order(), 4);
//! ```

pub mod complete_system;
pub mod corpus;
pub mod duality;
pub mod groups;
pub mod interpretation;
pub mod io;
pub mod report;
pub mod sorted_group;
pub mod sorts;

pub use complete_system::{CompleteSystem, SortKey, SystemError};
pub use groups::{FiberProduct, FiniteGroup, GroupError, GroupMap, NormalSubgroup};
pub use report::{AxiomReport, CheckEntry, CheckStatus};
pub use sorted_group::SortedFiniteGroup;
pub use sorts::{SortFamily, SortTerm, SortTuple, Support};
