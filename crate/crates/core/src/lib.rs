//! Structural invariants of association schemes and p-transitivity of
//! their modular adjacency algebras.
//!
//! The library ingests a scheme as a relation matrix or as its
//! intersection-number tensor, validates the scheme axioms, and computes:
//!
//! - the combinatorial structure: complex products, closed subsets, the
//!   thin radical and thin residue, strongly normal and singular subsets;
//! - the modular side: the regular module of the adjacency algebra over
//!   GF(p) in the adjacency basis, and the space of vectors fixed up to
//!   valency scalars — whose dimension decides p-transitivity;
//! - structural criteria that decide p-transitivity without linear algebra
//!   for quasi-thin schemes and for schemes with thin thin residue, plus a
//!   cross-check of the two routes.
//!
//! ```
//! use schemekit_core::{parse_relation_matrix, scheme_from_relation_matrix, CheckMode};
//! use schemekit_core::criteria::DecisionMethod;
//!
//! let pentagon = "5\n01221\n10122\n21012\n22101\n12210\n";
//! let matrix = parse_relation_matrix(pentagon).unwrap();
//! let scheme = scheme_from_relation_matrix(&matrix, CheckMode::Strict).unwrap();
//! let decision = scheme.decide(2, DecisionMethod::Both).unwrap();
//! assert!(decision.transitive);
//! assert_eq!(decision.agreement, Some(true));
//! ```

pub mod criteria;
pub mod error;
pub mod ingest;
pub mod modular;
pub mod report;
pub mod scheme;
pub mod structure;

pub use error::{AxiomIdentity, Error, Result};
pub use ingest::{
    emit_report, emit_tensor, parse_catalog, parse_catalog_lossy, parse_relation_matrix,
    parse_tensor, CatalogEntry, ReportEntry, ReportFormat,
};
pub use modular::{is_prime, span_dimension, FixedSpace, FpMatrix, FpVector};
pub use report::{analyze, AnalysisReport};
pub use scheme::{
    scheme_from_relation_matrix, tensor_from_relation_matrix, validate_tensor, CheckMode,
    IntersectionTensor, RelationMatrix, Scheme,
};
pub use structure::{QuasiThinCase, RelationSubset, DEFAULT_MAX_FREE_BITS};
