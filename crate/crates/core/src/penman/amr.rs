use std::collections::HashMap;

use crate::graph::{NodeId, RoleSlots, SemanticGraph};

use super::{PenmanTree, SlotValue};

/// Roles that end in `-of` without being inversions.
const NON_INVERTED: &[&str] = &["consist-of", "prep-on-behalf-of", "prep-out-of"];

/// Converts one AMR tree.
///
/// Every variable becomes a concept named after its label, every constant
/// occurrence a classless entity, every slot one edge. Inverted roles
/// (`:ARG0-of`) between two variables are turned around into forward edges.
/// Repeated role names on one concept (`:mod`, `:mod`) are indexed.
pub fn amr_to_graph(tree: &PenmanTree) -> SemanticGraph {
    let mut graph = SemanticGraph::new();
    let mut slots = RoleSlots::new();
    amr_into(tree, &mut graph, &mut slots, |_, _| None);
    slots.commit(&mut graph).expect("slot indices are unique by construction");
    graph
}

/// Converts several trees into one graph as a disjoint union.
pub fn amrs_to_graph(trees: &[PenmanTree]) -> SemanticGraph {
    let mut graph = SemanticGraph::new();
    let mut slots = RoleSlots::new();
    for tree in trees {
        amr_into(tree, &mut graph, &mut slots, |_, _| None);
    }
    slots.commit(&mut graph).expect("slot indices are unique by construction");
    graph
}

/// Adds the nodes of `tree` to `graph` and queues its edges on `slots`.
///
/// `shared_constant` may supply an existing node for a constant token; when
/// it returns `None` a fresh entity is created. Returns the node of each
/// variable.
pub fn amr_into<F>(
    tree: &PenmanTree,
    graph: &mut SemanticGraph,
    slots: &mut RoleSlots,
    mut shared_constant: F,
) -> HashMap<String, NodeId>
where
    F: FnMut(&mut SemanticGraph, &super::Constant) -> Option<NodeId>,
{
    let mut vars = HashMap::new();
    for (var, concept) in tree.variables() {
        let id = graph
            .add_concept(concept.clone())
            .expect("parser rejects empty concept labels");
        vars.insert(var.clone(), id);
    }
    for slot in tree.slots() {
        let owner = vars[&slot.owner].clone();
        let (target, is_concept) = match &slot.value {
            SlotValue::Node(v) | SlotValue::Reference(v) => (vars[v].clone(), true),
            SlotValue::Constant(c) => {
                let id = match shared_constant(graph, c) {
                    Some(id) => id,
                    None => graph
                        .add_entity(c.text(), Vec::<String>::new())
                        .expect("parser rejects empty constants"),
                };
                let concept = graph.node(&id).is_some_and(|n| n.is_concept());
                (id, concept)
            }
        };
        match inverted(&slot.role) {
            Some(forward) if is_concept => slots.push(target, forward, owner),
            _ => slots.push(owner, slot.role.clone(), target),
        }
    }
    vars
}

fn inverted(role: &str) -> Option<&str> {
    if NON_INVERTED.contains(&role) {
        return None;
    }
    role.strip_suffix("-of").filter(|r| !r.is_empty())
}
