//! Knowledge-graph events to semantic graphs.
//!
//! Each resource typed `sem:Event` becomes a `sem:Event` concept that owns:
//!
//! - `id`: an entity holding the event's prefixed name,
//! - `rdfs:label`: an entity per label literal,
//! - `subEvent[1..k]`: the concepts of events declaring `sem:subEventOf` it,
//!   in document order,
//! - one role per other predicate, pointing to a concept named after the
//!   predicate, which in turn has `id` (resource object) or `value` (literal
//!   object) pointing to an entity.
//!
//! Triples whose subject is not an event produce detached predicate concepts
//! that additionally carry a `subject` role to an entity naming the subject.

use std::collections::{HashMap, HashSet};

use crate::graph::{NodeId, RoleLabel, RoleSlots, SemanticGraph};
use crate::turtle::{Term, Triple, TripleStore, RDF, RDFS};

pub const SEM: &str = "http://semanticweb.cs.vu.nl/2009/11/sem/";

pub const EVENT_CONCEPT: &str = "sem:Event";

fn is_type(t: &Term) -> bool {
    t.is("rdf:type", &format!("{RDF}type"))
}

fn is_event_class(t: &Term) -> bool {
    t.is("sem:Event", &format!("{SEM}Event"))
}

fn is_label(t: &Term) -> bool {
    t.is("rdfs:label", &format!("{RDFS}label"))
}

fn is_sub_event_of(t: &Term) -> bool {
    t.is("sem:subEventOf", &format!("{SEM}subEventOf"))
}

/// Resources typed `sem:Event`, in order of their first type triple.
pub fn events(store: &TripleStore) -> Vec<&Term> {
    let mut seen = HashSet::new();
    store
        .triples
        .iter()
        .filter(|t| is_type(&t.predicate) && is_event_class(&t.object))
        .map(|t| &t.subject)
        .filter(|s| seen.insert(s.iri().unwrap_or_default()))
        .collect()
}

/// Events that are not declared a sub-event of another event.
pub fn top_level_events(store: &TripleStore) -> Vec<&Term> {
    let all = events(store);
    let keys: HashSet<&str> = all.iter().filter_map(|e| e.iri()).collect();
    let children: HashSet<&str> = store
        .triples
        .iter()
        .filter(|t| is_sub_event_of(&t.predicate) && t.object.iri().is_some_and(|o| keys.contains(o)))
        .filter_map(|t| t.subject.iri())
        .collect();
    all.into_iter()
        .filter(|e| !e.iri().is_some_and(|i| children.contains(i)))
        .collect()
}

pub fn events_to_graph(store: &TripleStore) -> SemanticGraph {
    let mut graph = SemanticGraph::new();
    let mut concept_of: HashMap<&str, NodeId> = HashMap::new();
    for event in events(store) {
        let c = graph.add_concept(EVENT_CONCEPT).expect("non-empty");
        let id = graph
            .add_entity(event.text(), Vec::<String>::new())
            .expect("resource names are non-empty");
        graph.add_edge(&c, RoleLabel::new("id"), &id).expect("fresh slot");
        concept_of.insert(event.iri().expect("events are resources"), c);
    }
    let event_node = |t: &Term| t.iri().and_then(|i| concept_of.get(i)).cloned();

    let mut slots = RoleSlots::new();
    let mut children: Vec<(NodeId, NodeId)> = Vec::new();
    for Triple { subject, predicate, object } in &store.triples {
        let owner = event_node(subject);
        if owner.is_some() && is_type(predicate) && is_event_class(object) {
            continue;
        }
        if is_sub_event_of(predicate) {
            if let (Some(child), Some(parent)) = (&owner, event_node(object)) {
                children.push((parent, child.clone()));
                continue;
            }
        }
        if let (Some(ev), true) = (&owner, is_label(predicate)) {
            let label = add_value_entity(&mut graph, object.text());
            slots.push(ev.clone(), predicate.text(), label);
            continue;
        }

        let pred = graph.add_concept(predicate.text()).expect("non-empty");
        match &owner {
            Some(ev) => slots.push(ev.clone(), predicate.text(), pred.clone()),
            None => {
                let s = graph
                    .add_entity(subject.text(), Vec::<String>::new())
                    .expect("non-empty");
                slots.push(pred.clone(), "subject", s);
            }
        }
        let (role, value) = if object.is_resource() {
            ("id", object.text())
        } else {
            ("value", object.text())
        };
        let target = add_value_entity(&mut graph, value);
        slots.push(pred, role, target);
    }
    slots.commit(&mut graph).expect("slot indices are unique by construction");

    let mut counts: HashMap<NodeId, u32> = HashMap::new();
    for (parent, child) in children {
        let n = counts.entry(parent.clone()).or_default();
        *n += 1;
        graph
            .add_edge(&parent, RoleLabel::indexed("subEvent", *n), &child)
            .expect("subEvent indices are fresh");
    }
    graph
}

fn add_value_entity(graph: &mut SemanticGraph, value: &str) -> NodeId {
    // the empty literal "" still needs a non-empty entity value
    let value = if value.is_empty() { "\"\"" } else { value };
    graph.add_entity(value, Vec::<String>::new()).expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Node;
    use crate::turtle::parse_turtle;
    use crate::validate::Validation;

    const PREFIXES: &str = "@prefix sem: <http://semanticweb.cs.vu.nl/2009/11/sem/> .\n\
        @prefix wd: <http://www.wikidata.org/entity/> .\n\
        @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
        @prefix ex: <http://example.org/> .\n";

    fn convert(body: &str) -> SemanticGraph {
        events_to_graph(&parse_turtle(&format!("{PREFIXES}{body}")).unwrap())
    }

    fn entity_value<'a>(g: &'a SemanticGraph, id: &NodeId) -> &'a str {
        match g.node(id) {
            Some(Node::Entity { value, .. }) => value,
            other => panic!("not an entity: {other:?}"),
        }
    }

    #[test]
    fn event_with_label() {
        let g = convert("wd:Q1 a sem:Event ; rdfs:label \"L\" .");
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        let ev = g.concepts_named(EVENT_CONCEPT).next().unwrap().clone();
        assert_eq!(entity_value(&g, g.role_target(&ev, &RoleLabel::new("id")).unwrap()), "wd:Q1");
        assert_eq!(entity_value(&g, g.role_target(&ev, &RoleLabel::new("rdfs:label")).unwrap()), "L");
    }

    #[test]
    fn sub_event_is_owned_by_parent() {
        let g = convert("wd:Q1 a sem:Event .\nwd:Q2 a sem:Event ; sem:subEventOf wd:Q1 .");
        let events: Vec<NodeId> = g.concepts_named(EVENT_CONCEPT).cloned().collect();
        let (top, child) = (&events[0], &events[1]);
        assert_eq!(g.role_target(top, &RoleLabel::indexed("subEvent", 1)), Some(child));
        assert!(g.validate(Validation::Lax).is_empty());
    }

    #[test]
    fn resource_property() {
        let g = convert("wd:Q1 a sem:Event ; ex:place wd:P9 .");
        let ev = g.concepts_named(EVENT_CONCEPT).next().unwrap().clone();
        let place = g.role_target(&ev, &RoleLabel::new("ex:place")).unwrap().clone();
        assert_eq!(g.node(&place).unwrap().concept_name(), Some("ex:place"));
        assert_eq!(entity_value(&g, g.role_target(&place, &RoleLabel::new("id")).unwrap()), "wd:P9");
    }

    #[test]
    fn literal_property_and_repeats() {
        let g = convert("wd:Q1 a sem:Event ; ex:year \"1789\" ; rdfs:label \"a\"@fr, \"b\"@en .");
        let ev = g.concepts_named(EVENT_CONCEPT).next().unwrap().clone();
        let year = g.role_target(&ev, &RoleLabel::new("ex:year")).unwrap().clone();
        assert_eq!(entity_value(&g, g.role_target(&year, &RoleLabel::new("value")).unwrap()), "1789");
        assert!(g.role_target(&ev, &RoleLabel::indexed("rdfs:label", 2)).is_some());
    }

    #[test]
    fn non_event_subjects_form_islands() {
        let g = convert("wd:P9 ex:country wd:F .");
        assert_eq!(g.concepts_named(EVENT_CONCEPT).count(), 0);
        let c = g.concepts_named("ex:country").next().unwrap().clone();
        assert_eq!(entity_value(&g, g.role_target(&c, &RoleLabel::new("subject")).unwrap()), "wd:P9");
        assert_eq!(entity_value(&g, g.role_target(&c, &RoleLabel::new("id")).unwrap()), "wd:F");
    }

    #[test]
    fn empty_store() {
        assert!(events_to_graph(&TripleStore::default()).is_empty());
    }

    #[test]
    fn top_level() {
        let s = parse_turtle(&format!(
            "{PREFIXES}wd:Q1 a sem:Event .\nwd:Q2 a sem:Event ; sem:subEventOf wd:Q1 .\nwd:Q3 a sem:Event ."
        ))
        .unwrap();
        let tops: Vec<&str> = top_level_events(&s).iter().map(|t| t.text()).collect();
        assert_eq!(tops, ["wd:Q1", "wd:Q3"]);
    }
}
