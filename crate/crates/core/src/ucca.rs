//! UCCA passages.
//!
//! A passage is read from line records:
//!
//! ```text
//! unit <id>
//! term <id> <text>
//! edge <parent> <child> <category>
//! root <id>
//! ```
//!
//! Blank lines and lines starting with `#` are skipped. Units become
//! `UCCA.Unit` concepts, terminals become `UCCA.Terminal` entities holding
//! their text, and each edge becomes a role named by its category. Node ids
//! are kept.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::graph::{Node, NodeId, RoleSlots, SemanticGraph};

pub const UNIT_CONCEPT: &str = "UCCA.Unit";
pub const TERMINAL_CLASS: &str = "UCCA.Terminal";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UccaNode {
    Unit,
    Terminal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UccaEdge {
    pub parent: NodeId,
    pub child: NodeId,
    pub category: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UccaPassage {
    pub nodes: BTreeMap<NodeId, UccaNode>,
    /// In document order.
    pub edges: Vec<UccaEdge>,
    pub root: NodeId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct UccaError {
    /// 1-based; 0 for whole-passage errors.
    pub line: usize,
    pub kind: UccaErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UccaErrorKind {
    #[error("unknown record {0:?}")]
    UnknownRecord(String),
    #[error("wrong number of fields for {0:?}")]
    Arity(&'static str),
    #[error("invalid node id {0:?}")]
    InvalidId(String),
    #[error("duplicate node id {0:?}")]
    DuplicateId(String),
    #[error("no node with id {0:?}")]
    MissingId(String),
    #[error("terminal {0:?} has children")]
    TerminalWithChildren(String),
    #[error("passage has no root")]
    MissingRoot,
    #[error("root already declared")]
    DuplicateRoot,
    #[error("root {0:?} is a terminal")]
    TerminalRoot(String),
    #[error("node {0:?} has no parent")]
    Orphan(String),
}

pub fn parse_ucca(text: &str) -> Result<UccaPassage, UccaError> {
    let err = |line, kind| UccaError { line, kind };
    let mut nodes = BTreeMap::new();
    let mut defined_at: HashMap<NodeId, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut root: Option<(NodeId, usize)> = None;

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (record, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim_start();
        let id = |s: &str| NodeId::new(s).map_err(|_| err(line_no, UccaErrorKind::InvalidId(s.to_owned())));
        match record {
            "unit" | "term" => {
                let (name, node) = if record == "unit" {
                    let fields: Vec<&str> = rest.split_whitespace().collect();
                    let [name] = fields[..] else {
                        return Err(err(line_no, UccaErrorKind::Arity("unit")));
                    };
                    (name, UccaNode::Unit)
                } else {
                    let Some((name, text)) = rest.split_once(char::is_whitespace) else {
                        return Err(err(line_no, UccaErrorKind::Arity("term")));
                    };
                    (name, UccaNode::Terminal(text.trim().to_owned()))
                };
                let node_id = id(name)?;
                if nodes.contains_key(&node_id) {
                    return Err(err(line_no, UccaErrorKind::DuplicateId(name.to_owned())));
                }
                defined_at.insert(node_id.clone(), line_no);
                nodes.insert(node_id, node);
            }
            "edge" => {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                let [parent, child, category] = fields[..] else {
                    return Err(err(line_no, UccaErrorKind::Arity("edge")));
                };
                edges.push(UccaEdge {
                    parent: id(parent)?,
                    child: id(child)?,
                    category: category.to_owned(),
                });
                edge_lines.push(line_no);
            }
            "root" => {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                let [name] = fields[..] else {
                    return Err(err(line_no, UccaErrorKind::Arity("root")));
                };
                if root.is_some() {
                    return Err(err(line_no, UccaErrorKind::DuplicateRoot));
                }
                root = Some((id(name)?, line_no));
            }
            other => return Err(err(line_no, UccaErrorKind::UnknownRecord(other.to_owned()))),
        }
    }

    for (edge, &line) in edges.iter().zip(&edge_lines) {
        for end in [&edge.parent, &edge.child] {
            if !nodes.contains_key(end) {
                return Err(err(line, UccaErrorKind::MissingId(end.to_string())));
            }
        }
        if matches!(nodes[&edge.parent], UccaNode::Terminal(_)) {
            return Err(err(line, UccaErrorKind::TerminalWithChildren(edge.parent.to_string())));
        }
    }
    let (root, root_line) = root.ok_or(err(0, UccaErrorKind::MissingRoot))?;
    match nodes.get(&root) {
        None => return Err(err(root_line, UccaErrorKind::MissingId(root.to_string()))),
        Some(UccaNode::Terminal(_)) => return Err(err(root_line, UccaErrorKind::TerminalRoot(root.to_string()))),
        Some(UccaNode::Unit) => {}
    }
    let mut orphans: Vec<(&NodeId, usize)> = nodes
        .keys()
        .filter(|id| **id != root && !edges.iter().any(|e| &e.child == *id))
        .map(|id| (id, defined_at[id]))
        .collect();
    orphans.sort_by_key(|&(_, line)| line);
    if let Some((id, line)) = orphans.first() {
        return Err(err(*line, UccaErrorKind::Orphan(id.to_string())));
    }
    Ok(UccaPassage { nodes, edges, root })
}

/// Converts a passage, keeping its node ids.
///
/// Same-category edges from one unit are numbered `X[1..k]` in document
/// order.
pub fn ucca_to_graph(passage: &UccaPassage) -> SemanticGraph {
    let mut graph = SemanticGraph::new();
    for (id, node) in &passage.nodes {
        let node = match node {
            UccaNode::Unit => Node::Concept {
                name: UNIT_CONCEPT.to_owned(),
            },
            UccaNode::Terminal(text) => Node::Entity {
                value: text.clone(),
                classes: vec![TERMINAL_CLASS.to_owned()],
            },
        };
        graph.insert_node(id.clone(), node).expect("ids are unique");
    }
    let mut slots = RoleSlots::new();
    for e in &passage.edges {
        slots.push(e.parent.clone(), e.category.clone(), e.child.clone());
    }
    slots.commit(&mut graph).expect("parents are units");
    graph
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RoleLabel;
    use crate::validate::Validation;

    const GOLF: &str = "unit 1\nterm 2 Golf\nterm 3 became\nedge 1 2 A\nedge 1 3 P\nroot 1\n";

    fn kind(text: &str) -> (usize, UccaErrorKind) {
        let e = parse_ucca(text).unwrap_err();
        (e.line, e.kind)
    }

    #[test]
    fn small_passage() {
        let p = parse_ucca(GOLF).unwrap();
        assert_eq!((p.nodes.len(), p.edges.len()), (3, 2));
        let g = ucca_to_graph(&p);
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        assert_eq!(g.concepts_named(UNIT_CONCEPT).count(), 1);
        let root = NodeId::new("1").unwrap();
        let golf = g.role_target(&root, &RoleLabel::new("A")).unwrap();
        assert!(matches!(g.node(golf), Some(Node::Entity { value, classes }) if value == "Golf" && classes == &[TERMINAL_CLASS]));
        assert!(g.validate(Validation::Lax).is_empty());
    }

    #[test]
    fn terminal_text_keeps_inner_spaces() {
        let p = parse_ucca("unit u\nterm t New  York\nedge u t A\nroot u\n").unwrap();
        assert_eq!(p.nodes[&NodeId::new("t").unwrap()], UccaNode::Terminal("New  York".into()));
    }

    #[test]
    fn repeated_category_is_indexed() {
        let p = parse_ucca("unit u\nterm a x\nterm b y\nedge u a C\nedge u b C\nroot u\n").unwrap();
        let labels: Vec<String> = ucca_to_graph(&p).edges().iter().map(|e| e.label.to_string()).collect();
        assert_eq!(labels, ["C[1]", "C[2]"]);
    }

    #[test]
    fn two_parents() {
        let text = "unit r\nunit a\nunit b\nterm t x\nedge r a H\nedge r b H\nedge a t A\nedge b t A\nroot r\n";
        let g = ucca_to_graph(&parse_ucca(text).unwrap());
        assert_eq!(g.in_degree(&NodeId::new("t").unwrap()), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(kind(""), (0, UccaErrorKind::MissingRoot));
        assert_eq!(kind("unit a\nunit a\n").0, 2);
        assert!(matches!(kind("unit a\nedge a b A\nroot a\n"), (2, UccaErrorKind::MissingId(_))));
        assert!(matches!(
            kind("unit a\nterm t x\nedge a t A\nedge t a B\nroot a\n"),
            (4, UccaErrorKind::TerminalWithChildren(_))
        ));
        assert!(matches!(kind("unit a\nunit b\nroot a\n"), (2, UccaErrorKind::Orphan(_))));
        assert!(matches!(kind("term t x\nroot t\n"), (2, UccaErrorKind::TerminalRoot(_))));
        assert_eq!(kind("unit a\nroot a\nroot a\n"), (3, UccaErrorKind::DuplicateRoot));
        assert!(matches!(kind("node a\n"), (1, UccaErrorKind::UnknownRecord(_))));
        assert_eq!(kind("term t\n"), (1, UccaErrorKind::Arity("term")));
        assert!(matches!(kind("unit a/b\n"), (1, UccaErrorKind::InvalidId(_))));
    }
}
