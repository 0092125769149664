//! Total satisfiability of looped multi-hypergraphs.
//!
//! A graph stands for the set of CNF formulae that "live" on it, and is
//! totally satisfiable when that set is nonempty and every member is
//! satisfiable. The crate provides the CNF layer, the graph layer, the
//! embedding between them, decision procedures, satisfiability-preserving
//! rewriting and reduction rules, and enumeration of small graphs.

pub mod canon;
pub mod catalog;
pub mod cnf;
pub mod embedding;
pub mod enumerate;
pub mod error;
pub mod logic;
pub mod mhgraph;
pub mod reduce;
pub mod rewrite;
pub mod sat;

pub use canon::{canonical_form, CanonicalForm};
pub use cnf::{Assignment, Clause, Cnf, Literal};
pub use embedding::{CnfSet, Term};
pub use error::{Error, Result};
pub use mhgraph::{Edge, EdgeMultiset, MHGraph, Vertex};
pub use sat::{SatConfig, SatStatus, Strategy};
