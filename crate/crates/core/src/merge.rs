//! Fusing two graphs along a node correspondence.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::graph::{Edge, Node, NodeId, SemanticGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MergeError {
    #[error("node {0} does not exist in the first graph")]
    UnknownLeft(NodeId),
    #[error("node {0} does not exist in the second graph")]
    UnknownRight(NodeId),
    #[error("node {0} appears more than once in the correspondence")]
    RepeatedNode(NodeId),
    #[error("cannot fuse {left} with {right}: {reason}")]
    Incompatible {
        left: NodeId,
        right: NodeId,
        reason: String,
    },
    #[error("fused node {concept} would fill role {label} twice")]
    RoleSlotConflict { concept: NodeId, label: String },
}

/// Disjoint union of `left` and `right` with each corresponding pair fused.
///
/// Result ids are fresh: `left` nodes are numbered first in ascending id
/// order, then the unfused `right` nodes. Fusion is only allowed between
/// concepts with equal names, entities with equal values and classes, or two
/// omitted nodes.
pub fn merge(
    left: &SemanticGraph,
    right: &SemanticGraph,
    correspondence: &[(NodeId, NodeId)],
) -> Result<SemanticGraph, MergeError> {
    let mut seen_left = HashSet::new();
    let mut seen_right = HashSet::new();
    let mut fused: BTreeMap<&NodeId, &NodeId> = BTreeMap::new();
    for (l, r) in correspondence {
        let ln = left.node(l).ok_or_else(|| MergeError::UnknownLeft(l.clone()))?;
        let rn = right.node(r).ok_or_else(|| MergeError::UnknownRight(r.clone()))?;
        if !seen_left.insert(l) {
            return Err(MergeError::RepeatedNode(l.clone()));
        }
        if !seen_right.insert(r) {
            return Err(MergeError::RepeatedNode(r.clone()));
        }
        if let Some(reason) = incompatibility(ln, rn) {
            return Err(MergeError::Incompatible {
                left: l.clone(),
                right: r.clone(),
                reason,
            });
        }
        fused.insert(r, l);
    }

    let mut out = SemanticGraph::new();
    let mut left_ids = BTreeMap::new();
    for (id, node) in left.nodes() {
        left_ids.insert(id, fresh(&mut out, node));
    }
    let mut right_ids = BTreeMap::new();
    for (id, node) in right.nodes() {
        let new_id = match fused.get(id) {
            Some(l) => left_ids[*l].clone(),
            None => fresh(&mut out, node),
        };
        right_ids.insert(id, new_id);
    }

    let remap = |ids: &BTreeMap<&NodeId, NodeId>, id: &NodeId| ids.get(id).cloned().unwrap_or_else(|| id.clone());
    for e in left.edges() {
        out.insert_edge_unchecked(Edge {
            source: remap(&left_ids, &e.source),
            label: e.label.clone(),
            target: remap(&left_ids, &e.target),
        });
    }
    let left_slots: HashSet<(NodeId, String)> = out
        .edges()
        .iter()
        .map(|e| (e.source.clone(), e.label.to_string()))
        .collect();
    for e in right.edges() {
        let source = remap(&right_ids, &e.source);
        if left_slots.contains(&(source.clone(), e.label.to_string())) {
            return Err(MergeError::RoleSlotConflict {
                concept: source,
                label: e.label.to_string(),
            });
        }
        out.insert_edge_unchecked(Edge {
            source,
            label: e.label.clone(),
            target: remap(&right_ids, &e.target),
        });
    }
    Ok(out)
}

fn fresh(graph: &mut SemanticGraph, node: &Node) -> NodeId {
    match node {
        Node::Concept { name } => graph.add_concept(name.clone()),
        Node::Entity { value, classes } => graph.add_entity(value.clone(), classes.iter().cloned()),
        Node::Omitted => Ok(graph.add_omitted()),
    }
    .expect("payload already validated by the source graph")
}

fn incompatibility(l: &Node, r: &Node) -> Option<String> {
    match (l, r) {
        (Node::Concept { name: a }, Node::Concept { name: b }) if a != b => {
            Some(format!("concept names differ ({a:?} vs {b:?})"))
        }
        (Node::Entity { value: a, classes: ca }, Node::Entity { value: b, classes: cb }) if a != b || ca != cb => {
            Some("entity values or classes differ".to_owned())
        }
        (Node::Concept { .. }, Node::Concept { .. })
        | (Node::Entity { .. }, Node::Entity { .. })
        | (Node::Omitted, Node::Omitted) => None,
        _ => Some(format!("node kinds differ ({:?} vs {:?})", l.kind(), r.kind())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_isomorphic, RoleLabel};

    fn pair() -> (SemanticGraph, NodeId, SemanticGraph, NodeId) {
        let mut a = SemanticGraph::new();
        let light = a.add_concept("Lighting").unwrap();
        let room = a.add_concept("Room").unwrap();
        a.add_edge(&light, RoleLabel::new("Object"), &room).unwrap();

        let mut b = SemanticGraph::new();
        let isa = b.add_concept("IsA").unwrap();
        let room2 = b.add_concept("Room").unwrap();
        let office = b.add_concept("Office").unwrap();
        b.add_edge(&isa, RoleLabel::new("A"), &room2).unwrap();
        b.add_edge(&isa, RoleLabel::new("B"), &office).unwrap();
        (a, room, b, room2)
    }

    #[test]
    fn fuses_shared_concept() {
        let (a, room, b, room2) = pair();
        let m = merge(&a, &b, &[(room, room2)]).unwrap();
        assert_eq!(m.node_count(), 4);
        assert_eq!(m.edge_count(), 3);
        let room = m.concepts_named("Room").next().unwrap().clone();
        assert_eq!(m.in_degree(&room), 2);
    }

    #[test]
    fn empty_correspondence_is_disjoint_union() {
        let (a, _, b, _) = pair();
        let m = merge(&a, &b, &[]).unwrap();
        assert_eq!(m.node_count(), a.node_count() + b.node_count());
        assert_eq!(m.edge_count(), a.edge_count() + b.edge_count());
        let id = merge(&a, &SemanticGraph::new(), &[]).unwrap();
        assert!(is_isomorphic(&id, &a));
    }

    #[test]
    fn rejects_name_mismatch() {
        let (a, room, b, _) = pair();
        let office = b.concepts_named("Office").next().unwrap().clone();
        assert!(matches!(
            merge(&a, &b, &[(room, office)]),
            Err(MergeError::Incompatible { .. })
        ));
    }

    #[test]
    fn rejects_kind_mismatch_and_unknown_ids() {
        let mut a = SemanticGraph::new();
        let c = a.add_concept("4").unwrap();
        let mut b = SemanticGraph::new();
        let e = b.add_entity("4", Vec::<String>::new()).unwrap();
        assert!(matches!(
            merge(&a, &b, &[(c.clone(), e.clone())]),
            Err(MergeError::Incompatible { .. })
        ));
        let ghost = NodeId::new("ghost").unwrap();
        assert!(matches!(
            merge(&a, &b, &[(ghost, e)]),
            Err(MergeError::UnknownLeft(_))
        ));
    }

    #[test]
    fn rejects_slot_conflict() {
        let mut a = SemanticGraph::new();
        let x = a.add_concept("X").unwrap();
        let y = a.add_concept("Y").unwrap();
        a.add_edge(&x, RoleLabel::new("r"), &y).unwrap();
        let b = a.clone();
        assert!(matches!(
            merge(&a, &b, &[(x.clone(), x)]),
            Err(MergeError::RoleSlotConflict { .. })
        ));
    }
}
