//! DOT rendering.
//!
//! Concepts are boxes, entities are ellipses labelled with their classes
//! above the value, omitted nodes are unlabelled grey circles.

use crate::graph::{Node, SemanticGraph};
use crate::validate::{validate, Validation};
use crate::xml::XmlError;

/// Renders a lax-valid graph as a DOT digraph.
///
/// One node statement per node (ascending id), then one edge statement per
/// edge, grouped by source in the same order.
pub fn to_dot(graph: &SemanticGraph) -> Result<String, XmlError> {
    let violations = validate(graph, Validation::Lax);
    if !violations.is_empty() {
        return Err(XmlError::InvalidGraph(violations));
    }
    let mut out = String::from("digraph semanticgraph {\n  rankdir=TB;\n");
    for (id, node) in graph.nodes() {
        let attrs = match node {
            Node::Concept { name } => format!("shape=box, label={}", quote(name)),
            Node::Entity { value, classes } => {
                let mut label = String::new();
                for c in classes {
                    label.push_str(&escape(c));
                    label.push_str("\\n");
                }
                label.push_str(&escape(value));
                format!("shape=ellipse, label=\"{label}\"")
            }
            Node::Omitted => "shape=circle, style=filled, fillcolor=gray, label=\"\"".to_owned(),
        };
        out.push_str(&format!("  {} [{attrs}];\n", quote(id.as_str())));
    }
    for (id, _) in graph.nodes() {
        for e in graph.out_edges(id) {
            out.push_str(&format!(
                "  {} -> {} [label={}];\n",
                quote(e.source.as_str()),
                quote(e.target.as_str()),
                quote(&e.label.to_string())
            ));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out
}

/// Counts `(node statements, edge statements)` in output of [`to_dot`].
pub fn statement_counts(dot: &str) -> (usize, usize) {
    let mut nodes = 0;
    let mut edges = 0;
    for line in dot.lines().map(str::trim) {
        // node ids never contain quotes, so the first quoted string is an id
        let Some(rest) = line.strip_prefix('"') else {
            continue;
        };
        let Some(end) = rest.find('"') else {
            continue;
        };
        if rest[end + 1..].starts_with(" -> ") {
            edges += 1;
        } else {
            nodes += 1;
        }
    }
    (nodes, edges)
}
