//! Semantic graph data model.
//!
//! A [`SemanticGraph`] is a directed, labelled multigraph over three node
//! kinds. Concepts are the only nodes that may own outgoing role edges;
//! entities and omitted nodes are leaves.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::num::NonZeroU32;

use thiserror::Error;

use crate::validate::ViolationCode;

/// Identifier of a node, unique within one graph.
///
/// Non-empty and restricted to `[A-Za-z0-9_.-]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if is_valid_id(&id) {
            Ok(NodeId(id))
        } else {
            Err(GraphError::InvalidNodeId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Concept,
    Entity,
    Omitted,
}

/// Payload of a graph node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    /// A single semantic aspect, named after its concept.
    Concept { name: String },
    /// A leaf instance identified by its value, optionally typed by classes.
    Entity { value: String, classes: Vec<String> },
    /// Placeholder for an implied but unexpressed role filler.
    Omitted,
}

impl Node {
    pub fn kind(&self) -> NodeKind {
        match self {
            Node::Concept { .. } => NodeKind::Concept,
            Node::Entity { .. } => NodeKind::Entity,
            Node::Omitted => NodeKind::Omitted,
        }
    }

    pub fn concept_name(&self) -> Option<&str> {
        match self {
            Node::Concept { name } => Some(name),
            _ => None,
        }
    }

    pub fn is_concept(&self) -> bool {
        matches!(self, Node::Concept { .. })
    }
}

/// A role name, optionally carrying a positive index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoleLabel {
    name: String,
    index: Option<NonZeroU32>,
}

impl RoleLabel {
    pub fn new(name: impl Into<String>) -> Self {
        RoleLabel {
            name: name.into(),
            index: None,
        }
    }

    /// Indexed role label.
    ///
    /// # Panics
    ///
    /// Panics if `index` is zero.
    pub fn indexed(name: impl Into<String>, index: u32) -> Self {
        let index = NonZeroU32::new(index).expect("role index must be positive");
        RoleLabel::with_index(name, Some(index))
    }

    pub fn with_index(name: impl Into<String>, index: Option<NonZeroU32>) -> Self {
        RoleLabel {
            name: name.into(),
            index,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> Option<u32> {
        self.index.map(NonZeroU32::get)
    }
}

impl fmt::Display for RoleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}[{}]", self.name, i),
            None => f.write_str(&self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: NodeId,
    pub label: RoleLabel,
    pub target: NodeId,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.source, self.label, self.target)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("concept name must not be empty")]
    EmptyConceptName,
    #[error("entity value must not be empty")]
    EmptyEntityValue,
    #[error("entity class name must not be empty")]
    EmptyClassName,
    #[error("role name must not be empty")]
    EmptyRoleName,
    #[error("invalid node id {0:?}")]
    InvalidNodeId(String),
    #[error("node id {0} is already in use")]
    DuplicateNodeId(NodeId),
    #[error("entity {0} cannot have outgoing edges")]
    EntityOutEdge(NodeId),
    #[error("omitted node {0} cannot have outgoing edges")]
    OmittedOutEdge(NodeId),
    #[error("no node with id {0}")]
    DanglingEndpoint(NodeId),
    #[error("concept {concept} already fills role slot {label}")]
    DuplicateRoleSlot { concept: NodeId, label: RoleLabel },
}

impl GraphError {
    /// The violation code corresponding to an edge rejection, if any.
    pub fn code(&self) -> Option<ViolationCode> {
        match self {
            GraphError::EntityOutEdge(_) => Some(ViolationCode::EntityOutEdge),
            GraphError::OmittedOutEdge(_) => Some(ViolationCode::OmittedOutEdge),
            GraphError::DanglingEndpoint(_) => Some(ViolationCode::DanglingTarget),
            GraphError::DuplicateRoleSlot { .. } => Some(ViolationCode::DuplicateRoleSlot),
            _ => None,
        }
    }
}

/// Directed labelled multigraph of concept, entity and omitted nodes.
///
/// Edges keep their insertion order. Equality is structural: identical node
/// maps and identical edge multisets.
#[derive(Debug, Clone, Default)]
pub struct SemanticGraph {
    nodes: BTreeMap<NodeId, Node>,
    edges: Vec<Edge>,
    next_id: u64,
}

impl SemanticGraph {
    pub fn new() -> Self {
        SemanticGraph::default()
    }

    pub fn add_concept(&mut self, name: impl Into<String>) -> Result<NodeId, GraphError> {
        let name = name.into();
        if name.is_empty() {
            return Err(GraphError::EmptyConceptName);
        }
        Ok(self.push_fresh(Node::Concept { name }))
    }

    pub fn add_entity<I, S>(&mut self, value: impl Into<String>, classes: I) -> Result<NodeId, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let node = Node::Entity {
            value: value.into(),
            classes: classes.into_iter().map(Into::into).collect(),
        };
        check_payload(&node)?;
        Ok(self.push_fresh(node))
    }

    pub fn add_omitted(&mut self) -> NodeId {
        self.push_fresh(Node::Omitted)
    }

    /// Inserts a node under a caller-chosen id.
    pub fn insert_node(&mut self, id: NodeId, node: Node) -> Result<(), GraphError> {
        check_payload(&node)?;
        if self.nodes.contains_key(&id) {
            return Err(GraphError::DuplicateNodeId(id));
        }
        self.nodes.insert(id, node);
        Ok(())
    }

    /// Adds a role edge, enforcing the leaf rule and role slot uniqueness.
    pub fn add_edge(&mut self, source: &NodeId, label: RoleLabel, target: &NodeId) -> Result<Edge, GraphError> {
        if label.name.is_empty() {
            return Err(GraphError::EmptyRoleName);
        }
        match self.nodes.get(source) {
            None => return Err(GraphError::DanglingEndpoint(source.clone())),
            Some(Node::Entity { .. }) => return Err(GraphError::EntityOutEdge(source.clone())),
            Some(Node::Omitted) => return Err(GraphError::OmittedOutEdge(source.clone())),
            Some(Node::Concept { .. }) => {}
        }
        if !self.nodes.contains_key(target) {
            return Err(GraphError::DanglingEndpoint(target.clone()));
        }
        if self.role_target(source, &label).is_some() {
            return Err(GraphError::DuplicateRoleSlot {
                concept: source.clone(),
                label,
            });
        }
        let edge = Edge {
            source: source.clone(),
            label,
            target: target.clone(),
        };
        self.edges.push(edge.clone());
        Ok(edge)
    }

    /// Appends an edge without any structural check.
    ///
    /// Readers use this to load documents whose defects are reported later by
    /// validation rather than at load time.
    pub fn insert_edge_unchecked(&mut self, edge: Edge) {
        self.edges.push(edge);
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &Node)> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn out_edges<'a>(&'a self, id: &'a NodeId) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| &e.source == id)
    }

    pub fn in_edges<'a>(&'a self, id: &'a NodeId) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| &e.target == id)
    }

    pub fn out_degree(&self, id: &NodeId) -> usize {
        self.out_edges(id).count()
    }

    pub fn in_degree(&self, id: &NodeId) -> usize {
        self.in_edges(id).count()
    }

    /// The node filling `label` on `source`, if that slot is filled.
    pub fn role_target(&self, source: &NodeId, label: &RoleLabel) -> Option<&NodeId> {
        self.edges
            .iter()
            .find(|e| &e.source == source && &e.label == label)
            .map(|e| &e.target)
    }

    /// Ids of all concept nodes with the given name, ascending.
    pub fn concepts_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.nodes
            .iter()
            .filter(move |(_, n)| n.concept_name() == Some(name))
            .map(|(id, _)| id)
    }

    /// Splits the graph into weakly connected components, keeping node ids.
    ///
    /// Components are ordered by their smallest node id.
    pub fn components(&self) -> Vec<SemanticGraph> {
        let mut parent: HashMap<&NodeId, &NodeId> = self.nodes.keys().map(|id| (id, id)).collect();
        fn find<'a>(parent: &mut HashMap<&'a NodeId, &'a NodeId>, id: &'a NodeId) -> &'a NodeId {
            let mut root = id;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = id;
            while parent[cur] != root {
                let next = parent[cur];
                parent.insert(cur, root);
                cur = next;
            }
            root
        }
        for e in &self.edges {
            if !self.nodes.contains_key(&e.source) || !self.nodes.contains_key(&e.target) {
                continue;
            }
            let a = find(&mut parent, &e.source);
            let b = find(&mut parent, &e.target);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent.insert(hi, lo);
            }
        }

        let mut groups: BTreeMap<&NodeId, SemanticGraph> = BTreeMap::new();
        for (id, node) in &self.nodes {
            let root = find(&mut parent, id);
            let g = groups.entry(root).or_default();
            g.nodes.insert(id.clone(), node.clone());
        }
        for e in &self.edges {
            if let Some(root) = self.nodes.get_key_value(&e.source).map(|(k, _)| find(&mut parent, k)) {
                groups.get_mut(root).unwrap().edges.push(e.clone());
            }
        }
        let mut out: Vec<SemanticGraph> = groups.into_values().collect();
        for g in &mut out {
            g.next_id = self.next_id;
        }
        out
    }

    fn push_fresh(&mut self, node: Node) -> NodeId {
        let id = self.fresh_id();
        self.nodes.insert(id.clone(), node);
        id
    }

    fn fresh_id(&mut self) -> NodeId {
        loop {
            self.next_id += 1;
            let id = NodeId(format!("n{}", self.next_id));
            if !self.nodes.contains_key(&id) {
                return id;
            }
        }
    }

    fn sorted_edges(&self) -> Vec<&Edge> {
        let mut edges: Vec<&Edge> = self.edges.iter().collect();
        edges.sort();
        edges
    }
}

fn check_payload(node: &Node) -> Result<(), GraphError> {
    match node {
        Node::Concept { name } if name.is_empty() => Err(GraphError::EmptyConceptName),
        Node::Entity { value, .. } if value.is_empty() => Err(GraphError::EmptyEntityValue),
        Node::Entity { classes, .. } if classes.iter().any(String::is_empty) => Err(GraphError::EmptyClassName),
        _ => Ok(()),
    }
}

impl PartialEq for SemanticGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.edges.len() == other.edges.len()
            && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for SemanticGraph {}

/// Collects role edges and assigns indices where one source would otherwise
/// fill the same role name more than once.
///
/// Names used once from a source stay plain; names used `k > 1` times become
/// `name[1]..name[k]` in push order.
#[derive(Debug, Default)]
pub struct RoleSlots {
    pending: Vec<(NodeId, String, NodeId)>,
}

impl RoleSlots {
    pub fn new() -> Self {
        RoleSlots::default()
    }

    pub fn push(&mut self, source: NodeId, role: impl Into<String>, target: NodeId) {
        self.pending.push((source, role.into(), target));
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn commit(self, graph: &mut SemanticGraph) -> Result<Vec<Edge>, GraphError> {
        let mut totals: HashMap<(&NodeId, &str), u32> = HashMap::new();
        for (s, r, _) in &self.pending {
            *totals.entry((s, r.as_str())).or_default() += 1;
        }
        let mut seen: HashMap<(&NodeId, &str), u32> = HashMap::new();
        let mut edges = Vec::with_capacity(self.pending.len());
        for (source, role, target) in &self.pending {
            let key = (source, role.as_str());
            let label = if totals[&key] > 1 {
                let n = seen.entry(key).or_default();
                *n += 1;
                RoleLabel::indexed(role.clone(), *n)
            } else {
                RoleLabel::new(role.clone())
            };
            edges.push(graph.add_edge(source, label, target)?);
        }
        Ok(edges)
    }
}

/// Checks whether two graphs are equal up to a renaming of node ids.
pub fn is_isomorphic(a: &SemanticGraph, b: &SemanticGraph) -> bool {
    if a.node_count() != b.node_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let sig_a = signatures(a);
    let sig_b = signatures(b);
    let mut hist_a: Vec<&Signature> = sig_a.values().collect();
    let mut hist_b: Vec<&Signature> = sig_b.values().collect();
    hist_a.sort();
    hist_b.sort();
    if hist_a != hist_b {
        return false;
    }

    let mut candidates: Vec<(&NodeId, Vec<&NodeId>)> = sig_a
        .iter()
        .map(|(id, sig)| (*id, sig_b.iter().filter(|(_, s)| *s == sig).map(|(i, _)| *i).collect()))
        .collect();
    candidates.sort_by_key(|(_, c)| c.len());

    let edges_b: HashMap<(&NodeId, &RoleLabel, &NodeId), usize> = count_edges(b);
    let edges_a: HashMap<(&NodeId, &RoleLabel, &NodeId), usize> = count_edges(a);

    let mut mapping: HashMap<&NodeId, &NodeId> = HashMap::new();
    let mut used: BTreeSet<&NodeId> = BTreeSet::new();
    search(0, &candidates, &edges_a, &edges_b, &mut mapping, &mut used)
}

type Signature = (String, Vec<String>, Vec<String>);

fn signatures(g: &SemanticGraph) -> BTreeMap<&NodeId, Signature> {
    g.nodes
        .iter()
        .map(|(id, node)| {
            let head = match node {
                Node::Concept { name } => format!("c:{name}"),
                Node::Entity { value, classes } => format!("e:{value}\u{0}{}", classes.join("\u{0}")),
                Node::Omitted => "o".to_owned(),
            };
            let mut outs: Vec<String> = g.out_edges(id).map(|e| e.label.to_string()).collect();
            let mut ins: Vec<String> = g.in_edges(id).map(|e| e.label.to_string()).collect();
            outs.sort();
            ins.sort();
            (id, (head, outs, ins))
        })
        .collect()
}

fn count_edges(g: &SemanticGraph) -> HashMap<(&NodeId, &RoleLabel, &NodeId), usize> {
    let mut m = HashMap::new();
    for e in &g.edges {
        *m.entry((&e.source, &e.label, &e.target)).or_default() += 1;
    }
    m
}

fn search<'a>(
    depth: usize,
    candidates: &[(&'a NodeId, Vec<&'a NodeId>)],
    edges_a: &HashMap<(&'a NodeId, &'a RoleLabel, &'a NodeId), usize>,
    edges_b: &HashMap<(&'a NodeId, &'a RoleLabel, &'a NodeId), usize>,
    mapping: &mut HashMap<&'a NodeId, &'a NodeId>,
    used: &mut BTreeSet<&'a NodeId>,
) -> bool {
    let Some((node, cands)) = candidates.get(depth) else {
        return true;
    };
    for &cand in cands {
        if used.contains(cand) {
            continue;
        }
        mapping.insert(node, cand);
        // every edge of `node` whose other endpoint is already mapped must
        // have an identical image
        let consistent = edges_a.iter().all(|(&(s, l, t), &n)| {
            if s != *node && t != *node {
                return true;
            }
            match (mapping.get(s), mapping.get(t)) {
                (Some(ms), Some(mt)) => edges_b.get(&(*ms, l, *mt)) == Some(&n),
                _ => true,
            }
        });
        if consistent {
            used.insert(cand);
            if search(depth + 1, candidates, edges_a, edges_b, mapping, used) {
                return true;
            }
            used.remove(cand);
        }
        mapping.remove(node);
    }
    false
}
