use metasrl::catalogue::bundled;
use metasrl::dot::{statement_counts, to_dot};
use metasrl::{is_isomorphic, merge, NodeId, RoleLabel, SemanticGraph, Validation};

fn role(g: &mut SemanticGraph, s: &NodeId, name: &str, t: &NodeId) {
    g.add_edge(s, RoleLabel::new(name), t).unwrap();
}

/// Bottom / Well / Lighting / Room with the lighting degree; returns the Room id.
fn lit_room(g: &mut SemanticGraph) -> NodeId {
    let bottom = g.add_concept("Bottom").unwrap();
    let well = g.add_concept("Well").unwrap();
    let lighting = g.add_concept("Lighting").unwrap();
    let room = g.add_concept("Room").unwrap();
    let degree = g.add_entity("4", ["5-level degree"]).unwrap();
    role(g, &bottom, "Container", &well);
    role(g, &bottom, "Contained", &room);
    role(g, &lighting, "Object", &room);
    role(g, &lighting, "Degree", &degree);
    room
}

/// IsA(Room, Office) qualified by a probability; attaches to `room`.
fn appears_office(g: &mut SemanticGraph, room: &NodeId) {
    let is_a = g.add_concept("IsA").unwrap();
    let office = g.add_concept("Office").unwrap();
    let probability = g.add_entity("0.7", ["probability"]).unwrap();
    role(g, &is_a, "A", room);
    role(g, &is_a, "B", &office);
    role(g, &is_a, "Degree", &probability);
}

fn scene() -> SemanticGraph {
    let mut g = SemanticGraph::new();
    let room = lit_room(&mut g);
    appears_office(&mut g, &room);
    g
}

#[test]
fn scene_is_strictly_valid() {
    let g = scene();
    assert_eq!((g.node_count(), g.edge_count()), (8, 7));
    let catalogue = bundled::well_scene();
    assert!(g.validate(Validation::Strict(&catalogue)).is_empty());
    assert_eq!(statement_counts(&to_dot(&g).unwrap()), (8, 7));
}

#[test]
fn room_is_shared() {
    let g = scene();
    let room = g.concepts_named("Room").next().unwrap();
    let mut fillers: Vec<String> = g.in_edges(room).map(|e| e.label.to_string()).collect();
    fillers.sort();
    assert_eq!(fillers, ["A", "Contained", "Object"]);
}

#[test]
fn merging_halves_on_room_rebuilds_scene() {
    let mut right = SemanticGraph::new();
    let right_room = lit_room(&mut right);
    let mut left = SemanticGraph::new();
    let left_room = left.add_concept("Room").unwrap();
    appears_office(&mut left, &left_room);
    assert_eq!((left.node_count(), right.node_count()), (4, 5));

    let merged = merge(&left, &right, &[(left_room, right_room)]).unwrap();
    assert_eq!((merged.node_count(), merged.edge_count()), (8, 7));
    assert!(is_isomorphic(&merged, &scene()));
    assert!(merged.validate(Validation::Strict(&bundled::well_scene())).is_empty());
}

#[test]
fn unfilled_roles_are_allowed() {
    // Lighting without a source: the catalogue does not list one, so adding
    // it is an unknown role, while leaving it out is fine.
    let mut g = scene();
    let lighting = g.concepts_named("Lighting").next().unwrap().clone();
    let catalogue = bundled::well_scene();
    assert!(g.validate(Validation::Strict(&catalogue)).is_empty());
    let gap = g.add_omitted();
    role(&mut g, &lighting, "Source", &gap);
    assert!(g.validate(Validation::Lax).is_empty());
    let codes: Vec<&str> = g
        .validate(Validation::Strict(&catalogue))
        .iter()
        .map(|v| v.code.as_str())
        .collect();
    assert_eq!(codes, ["UNKNOWN_ROLE"]);
}
