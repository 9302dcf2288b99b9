//! Structural and catalogue validation.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::catalogue::ConceptCatalogue;
use crate::graph::{Edge, Node, NodeId, SemanticGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationCode {
    EntityOutEdge,
    OmittedOutEdge,
    EdgeFromNonConcept,
    DanglingTarget,
    DuplicateRoleSlot,
    BadIndexSet,
    UnknownConcept,
    UnknownRole,
    IndexingMismatch,
}

impl ViolationCode {
    pub const ALL: [ViolationCode; 9] = [
        ViolationCode::EntityOutEdge,
        ViolationCode::OmittedOutEdge,
        ViolationCode::EdgeFromNonConcept,
        ViolationCode::DanglingTarget,
        ViolationCode::DuplicateRoleSlot,
        ViolationCode::BadIndexSet,
        ViolationCode::UnknownConcept,
        ViolationCode::UnknownRole,
        ViolationCode::IndexingMismatch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::EntityOutEdge => "ENTITY_OUT_EDGE",
            ViolationCode::OmittedOutEdge => "OMITTED_OUT_EDGE",
            ViolationCode::EdgeFromNonConcept => "EDGE_FROM_NON_CONCEPT",
            ViolationCode::DanglingTarget => "DANGLING_TARGET",
            ViolationCode::DuplicateRoleSlot => "DUPLICATE_ROLE_SLOT",
            ViolationCode::BadIndexSet => "BAD_INDEX_SET",
            ViolationCode::UnknownConcept => "UNKNOWN_CONCEPT",
            ViolationCode::UnknownRole => "UNKNOWN_ROLE",
            ViolationCode::IndexingMismatch => "INDEXING_MISMATCH",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ViolationCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ViolationCode::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown violation code {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    Node(NodeId),
    Edge(Edge),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Node(id) => id.fmt(f),
            Subject::Edge(e) => e.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub subject: Subject,
    pub message: String,
}

impl fmt::Display for Violation {
    /// `CODE<TAB>subject<TAB>message`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.code, self.subject, self.message)
    }
}

/// Validation mode. Strict mode checks concepts and roles against a catalogue.
#[derive(Debug, Clone, Copy)]
pub enum Validation<'a> {
    Lax,
    Strict(&'a ConceptCatalogue),
}

/// Returns all violations of `graph`; an empty list means the graph is valid.
///
/// Edge-level violations come first in edge order, then index-set violations
/// by source and role name, then (strict only) catalogue violations.
pub fn validate(graph: &SemanticGraph, mode: Validation<'_>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut slots = HashSet::new();
    let mut indices: BTreeMap<(&NodeId, &str), BTreeSet<u32>> = BTreeMap::new();

    for edge in graph.edges() {
        let source = graph.node(&edge.source);
        match source {
            None => out.push(edge_violation(
                ViolationCode::EdgeFromNonConcept,
                edge,
                format!("edge source {} is not a concept in this graph", edge.source),
            )),
            Some(Node::Entity { .. }) => out.push(edge_violation(
                ViolationCode::EntityOutEdge,
                edge,
                format!("entity {} is a leaf and cannot fill roles", edge.source),
            )),
            Some(Node::Omitted) => out.push(edge_violation(
                ViolationCode::OmittedOutEdge,
                edge,
                format!("omitted node {} is a leaf and cannot fill roles", edge.source),
            )),
            Some(Node::Concept { .. }) => {}
        }
        if !graph.contains(&edge.target) {
            out.push(edge_violation(
                ViolationCode::DanglingTarget,
                edge,
                format!("edge target {} does not exist", edge.target),
            ));
        }
        if !matches!(source, Some(Node::Concept { .. })) {
            continue;
        }
        if !slots.insert((&edge.source, &edge.label)) {
            out.push(edge_violation(
                ViolationCode::DuplicateRoleSlot,
                edge,
                format!("role slot {} of {} is filled more than once", edge.label, edge.source),
            ));
        }
        if let Some(i) = edge.label.index() {
            indices.entry((&edge.source, edge.label.name())).or_default().insert(i);
        }
    }

    for ((source, role), set) in &indices {
        let contiguous = set.iter().copied().eq(1..=set.len() as u32);
        if !contiguous {
            let list: Vec<String> = set.iter().map(u32::to_string).collect();
            out.push(Violation {
                code: ViolationCode::BadIndexSet,
                subject: Subject::Node((*source).clone()),
                message: format!(
                    "indices of role {role} are {{{}}}, expected 1..{}",
                    list.join(","),
                    set.len()
                ),
            });
        }
    }

    if let Validation::Strict(catalogue) = mode {
        check_catalogue(graph, catalogue, &mut out);
    }
    out
}

fn check_catalogue(graph: &SemanticGraph, catalogue: &ConceptCatalogue, out: &mut Vec<Violation>) {
    for (id, node) in graph.nodes() {
        if let Node::Concept { name } = node {
            if catalogue.lookup(name).is_none() {
                out.push(Violation {
                    code: ViolationCode::UnknownConcept,
                    subject: Subject::Node(id.clone()),
                    message: format!("concept {name:?} is not in the catalogue"),
                });
            }
        }
    }
    for edge in graph.edges() {
        let Some(Node::Concept { name }) = graph.node(&edge.source) else {
            continue;
        };
        let Some(def) = catalogue.lookup(name) else {
            continue;
        };
        match def.lookup_role(edge.label.name()) {
            None => out.push(edge_violation(
                ViolationCode::UnknownRole,
                edge,
                format!("concept {name:?} declares no role {:?}", edge.label.name()),
            )),
            Some(role) if role.indexed != edge.label.index().is_some() => {
                let msg = if role.indexed {
                    format!("role {:?} of {name:?} is indexed but the edge has no index", role.name)
                } else {
                    format!("role {:?} of {name:?} is not indexed but the edge has an index", role.name)
                };
                out.push(edge_violation(ViolationCode::IndexingMismatch, edge, msg));
            }
            Some(_) => {}
        }
    }
}

fn edge_violation(code: ViolationCode, edge: &Edge, message: String) -> Violation {
    Violation {
        code,
        subject: Subject::Edge(edge.clone()),
        message,
    }
}

impl SemanticGraph {
    pub fn validate(&self, mode: Validation<'_>) -> Vec<Violation> {
        validate(self, mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::bundled;
    use crate::graph::RoleLabel;

    fn codes(v: &[Violation]) -> Vec<ViolationCode> {
        v.iter().map(|v| v.code).collect()
    }

    #[test]
    fn code_names_round_trip() {
        for c in ViolationCode::ALL {
            assert_eq!(c.as_str().parse::<ViolationCode>(), Ok(c));
        }
        assert!("NOPE".parse::<ViolationCode>().is_err());
    }

    #[test]
    fn sparse_indices_are_reported_once() {
        let mut g = SemanticGraph::new();
        let ev = g.add_concept("Event").unwrap();
        let a = g.add_concept("Event").unwrap();
        let b = g.add_concept("Event").unwrap();
        g.add_edge(&ev, RoleLabel::indexed("subEvent", 1), &a).unwrap();
        g.add_edge(&ev, RoleLabel::indexed("subEvent", 3), &b).unwrap();
        let v = validate(&g, Validation::Lax);
        assert_eq!(codes(&v), [ViolationCode::BadIndexSet]);
        assert_eq!(v[0].subject, Subject::Node(ev));
    }

    #[test]
    fn cycles_are_allowed() {
        let mut g = SemanticGraph::new();
        let a = g.add_concept("A").unwrap();
        let b = g.add_concept("B").unwrap();
        g.add_edge(&a, RoleLabel::new("r"), &b).unwrap();
        g.add_edge(&b, RoleLabel::new("r"), &a).unwrap();
        g.add_edge(&a, RoleLabel::new("self"), &a).unwrap();
        assert!(validate(&g, Validation::Lax).is_empty());
    }

    #[test]
    fn unfilled_role_with_omitted_node() {
        let mut g = SemanticGraph::new();
        let l = g.add_concept("Lighting").unwrap();
        let o = g.add_omitted();
        g.add_edge(&l, RoleLabel::new("Source"), &o).unwrap();
        assert!(validate(&g, Validation::Lax).is_empty());
        let cat = bundled::well_scene();
        assert_eq!(codes(&validate(&g, Validation::Strict(&cat))), [ViolationCode::UnknownRole]);
    }

    #[test]
    fn violation_line_format() {
        let mut g = SemanticGraph::new();
        let c = g.add_concept("X").unwrap();
        let e = g.add_entity("4", Vec::<String>::new()).unwrap();
        g.insert_edge_unchecked(Edge {
            source: e,
            label: RoleLabel::new("r"),
            target: c,
        });
        let v = validate(&g, Validation::Lax);
        assert!(v[0].to_string().starts_with("ENTITY_OUT_EDGE\tn2 -r-> n1\t"));
    }
}
