//! Semantic graph modelling toolkit.
//!
//! The [`graph`] module holds the data model: concept, entity and omitted
//! nodes connected by role-labelled edges that always originate at a
//! concept. Graphs are checked by [`validate`], optionally against a
//! [`catalogue::ConceptCatalogue`], exchanged as canonical XML ([`xml`]) and
//! rendered as DOT ([`dot`]).
//!
//! Frontends convert other formats into semantic graphs:
//!
//! - [`penman`]: AMR and UMR in PENMAN notation
//! - [`turtle`] and [`kg`]: knowledge-graph events from a Turtle subset
//! - [`conll`]: CoNLL-style sentences with cause/effect span annotations
//! - [`ucca`]: UCCA passages in a line-based format

pub mod catalogue;
pub mod conll;
pub mod dot;
pub mod graph;
pub mod kg;
pub mod merge;
pub mod penman;
pub mod turtle;
pub mod ucca;
pub mod validate;
pub mod xml;

pub use catalogue::{ConceptCatalogue, ConceptDefinition, RoleDefinition};
pub use graph::{is_isomorphic, Edge, GraphError, Node, NodeId, NodeKind, RoleLabel, RoleSlots, SemanticGraph};
pub use merge::{merge, MergeError};
pub use validate::{validate, Subject, Validation, Violation, ViolationCode};
