//! Canonical XML exchange format for graphs and catalogues.
//!
//! Graph documents:
//!
//! ```text
//! <semanticgraph version="1">
//!   <concept id=".." name="..">  <role name=".." index=".."? target=".."/>*  </concept>
//!   <entity id=".." value="..">  <class name=".."/>*  </entity>
//!   <omitted id=".."/>
//! </semanticgraph>
//! ```
//!
//! Output is written without insignificant whitespace, nodes in ascending id
//! order and roles in edge insertion order, so equal graphs always produce
//! identical bytes.

use std::fmt::Write as _;

use roxmltree::{Document, NodeType};
use thiserror::Error;

use crate::catalogue::{CatalogueError, ConceptCatalogue, ConceptDefinition, RoleDefinition};
use crate::graph::{Edge, Node, NodeId, RoleLabel, SemanticGraph};
use crate::validate::{validate, Validation, Violation};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum XmlError {
    #[error("line {line}, column {column}: malformed XML: {message}")]
    Malformed { line: u32, column: u32, message: String },
    #[error("line {line}, column {column}: {message}")]
    Schema { line: u32, column: u32, message: String },
    #[error("graph has {} violation(s); first: {}", .0.len(), .0[0])]
    InvalidGraph(Vec<Violation>),
    #[error("character U+{0:04X} cannot be represented in XML")]
    Unrepresentable(u32),
}

impl XmlError {
    /// Line of the offending markup, for errors raised while reading.
    pub fn line(&self) -> Option<u32> {
        match self {
            XmlError::Malformed { line, .. } | XmlError::Schema { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Serializes a graph. The graph must pass lax validation.
pub fn to_xml(graph: &SemanticGraph) -> Result<String, XmlError> {
    let violations = validate(graph, Validation::Lax);
    if !violations.is_empty() {
        return Err(XmlError::InvalidGraph(violations));
    }
    let mut out = String::from("<semanticgraph version=\"1\"");
    if graph.is_empty() {
        out.push_str("/>");
        return Ok(out);
    }
    out.push('>');
    for (id, node) in graph.nodes() {
        match node {
            Node::Concept { name } => {
                open(&mut out, "concept", &[("id", id.as_str()), ("name", name)])?;
                let mut roles = graph.out_edges(id).peekable();
                if roles.peek().is_none() {
                    out.push_str("/>");
                    continue;
                }
                out.push('>');
                for e in roles {
                    let index = e.label.index().map(|i| i.to_string());
                    let mut attrs = vec![("name", e.label.name())];
                    if let Some(i) = &index {
                        attrs.push(("index", i));
                    }
                    attrs.push(("target", e.target.as_str()));
                    open(&mut out, "role", &attrs)?;
                    out.push_str("/>");
                }
                out.push_str("</concept>");
            }
            Node::Entity { value, classes } => {
                open(&mut out, "entity", &[("id", id.as_str()), ("value", value)])?;
                if classes.is_empty() {
                    out.push_str("/>");
                    continue;
                }
                out.push('>');
                for c in classes {
                    open(&mut out, "class", &[("name", c)])?;
                    out.push_str("/>");
                }
                out.push_str("</entity>");
            }
            Node::Omitted => {
                open(&mut out, "omitted", &[("id", id.as_str())])?;
                out.push_str("/>");
            }
        }
    }
    out.push_str("</semanticgraph>");
    Ok(out)
}

/// Parses a graph document.
///
/// Leaf nodes may carry `role` children so that documents with misplaced
/// edges can be loaded and reported by [`validate`]; everything else outside
/// the grammar is a schema error.
pub fn from_xml(text: &str) -> Result<SemanticGraph, XmlError> {
    let doc = parse(text)?;
    let root = doc.root_element();
    let at = Locator { doc: &doc };
    expect_root(&at, root, "semanticgraph")?;

    let mut graph = SemanticGraph::new();
    let mut pending: Vec<(roxmltree::Node, Edge)> = Vec::new();
    for el in element_children(&at, root)? {
        let (node, allowed): (Node, &[&str]) = match el.tag_name().name() {
            "concept" => {
                attrs_only(&at, el, &["id", "name"])?;
                (Node::Concept { name: non_empty(&at, el, "name")? }, &["role"])
            }
            "entity" => {
                attrs_only(&at, el, &["id", "value"])?;
                let value = non_empty(&at, el, "value")?;
                let mut classes = Vec::new();
                for c in element_children(&at, el)? {
                    if c.tag_name().name() == "class" {
                        attrs_only(&at, c, &["name"])?;
                        no_children(&at, c)?;
                        classes.push(non_empty(&at, c, "name")?);
                    }
                }
                (Node::Entity { value, classes }, &["class", "role"])
            }
            "omitted" => {
                attrs_only(&at, el, &["id"])?;
                (Node::Omitted, &["role"])
            }
            other => return Err(at.schema(el, format!("unexpected element <{other}> in <semanticgraph>"))),
        };
        let id = node_id(&at, el)?;
        if graph.contains(&id) {
            return Err(at.schema(el, format!("duplicate node id {id:?}")));
        }
        for child in element_children(&at, el)? {
            let name = child.tag_name().name();
            if !allowed.contains(&name) {
                return Err(at.schema(
                    child,
                    format!("unexpected element <{name}> in <{}>", el.tag_name().name()),
                ));
            }
            if name == "role" {
                pending.push((child, read_role(&at, child, &id)?));
            }
        }
        graph
            .insert_node(id, node)
            .map_err(|e| at.schema(el, e.to_string()))?;
    }
    for (el, edge) in pending {
        if !graph.contains(&edge.target) {
            return Err(at.schema(el, format!("role target {:?} does not exist", edge.target.as_str())));
        }
        graph.insert_edge_unchecked(edge);
    }
    Ok(graph)
}

fn read_role(at: &Locator, el: roxmltree::Node, source: &NodeId) -> Result<Edge, XmlError> {
    attrs_only(at, el, &["name", "index", "target"])?;
    no_children(at, el)?;
    let name = non_empty(at, el, "name")?;
    let index = match el.attribute("index") {
        None => None,
        Some(raw) => Some(parse_index(raw).ok_or_else(|| at.schema(el, format!("role index {raw:?} is not a positive integer")))?),
    };
    let target = required(at, el, "target")?;
    let target = NodeId::new(target).map_err(|e| at.schema(el, e.to_string()))?;
    Ok(Edge {
        source: source.clone(),
        label: RoleLabel::with_index(name, index),
        target,
    })
}

fn parse_index(raw: &str) -> Option<std::num::NonZeroU32> {
    if raw.is_empty() || !raw.bytes().all(|b| b.is_ascii_digit()) || raw.starts_with('0') {
        return None;
    }
    raw.parse().ok()
}

/// Serializes a catalogue, entries sorted by concept name.
pub fn catalogue_to_xml(catalogue: &ConceptCatalogue) -> Result<String, XmlError> {
    let mut out = String::from("<catalogue version=\"1\"");
    if catalogue.is_empty() {
        out.push_str("/>");
        return Ok(out);
    }
    out.push('>');
    for def in catalogue.iter() {
        let mut attrs = vec![("name", def.name.as_str())];
        if let Some(d) = &def.description {
            attrs.push(("description", d));
        }
        open(&mut out, "concept", &attrs)?;
        if def.roles.is_empty() {
            out.push_str("/>");
            continue;
        }
        out.push('>');
        for r in &def.roles {
            open(&mut out, "role", &[("name", &r.name)])?;
            if r.indexed {
                out.push_str(" indexed=\"true\"");
            }
            out.push_str("/>");
        }
        out.push_str("</concept>");
    }
    out.push_str("</catalogue>");
    Ok(out)
}

pub fn catalogue_from_xml(text: &str) -> Result<ConceptCatalogue, XmlError> {
    let doc = parse(text)?;
    let root = doc.root_element();
    let at = Locator { doc: &doc };
    expect_root(&at, root, "catalogue")?;

    let mut catalogue = ConceptCatalogue::new();
    for el in element_children(&at, root)? {
        if el.tag_name().name() != "concept" {
            return Err(at.schema(el, format!("unexpected element <{}> in <catalogue>", el.tag_name().name())));
        }
        attrs_only(&at, el, &["name", "description"])?;
        let mut def = ConceptDefinition::new(non_empty(&at, el, "name")?);
        def.description = el.attribute("description").map(str::to_owned);
        for r in element_children(&at, el)? {
            if r.tag_name().name() != "role" {
                return Err(at.schema(r, format!("unexpected element <{}> in <concept>", r.tag_name().name())));
            }
            attrs_only(&at, r, &["name", "indexed"])?;
            no_children(&at, r)?;
            let indexed = match r.attribute("indexed") {
                None | Some("false") => false,
                Some("true") => true,
                Some(other) => return Err(at.schema(r, format!("indexed must be \"true\" or \"false\", got {other:?}"))),
            };
            def.roles.push(RoleDefinition {
                name: non_empty(&at, r, "name")?,
                indexed,
            });
        }
        catalogue.define(def).map_err(|e| match e {
            CatalogueError::DuplicateConcept(_) | CatalogueError::DuplicateRole { .. } => at.schema(el, e.to_string()),
            other => at.schema(el, other.to_string()),
        })?;
    }
    Ok(catalogue)
}

struct Locator<'a, 'input> {
    doc: &'a Document<'input>,
}

impl Locator<'_, '_> {
    fn schema(&self, node: roxmltree::Node, message: String) -> XmlError {
        let range = node.range();
        let raw = &self.doc.input_text()[range.clone()];
        let lead = raw.len() - raw.trim_start().len();
        let pos = self.doc.text_pos_at(range.start + lead);
        XmlError::Schema {
            line: pos.row,
            column: pos.col,
            message,
        }
    }
}

fn parse(text: &str) -> Result<Document<'_>, XmlError> {
    Document::parse(text).map_err(|e| {
        let pos = e.pos();
        XmlError::Malformed {
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })
}

fn expect_root(at: &Locator, root: roxmltree::Node, name: &str) -> Result<(), XmlError> {
    if root.tag_name().name() != name || root.tag_name().namespace().is_some() {
        return Err(at.schema(root, format!("expected root element <{name}>, found <{}>", root.tag_name().name())));
    }
    attrs_only(at, root, &["version"])?;
    match root.attribute("version") {
        Some(FORMAT_VERSION) => Ok(()),
        Some(v) => Err(at.schema(root, format!("unsupported format version {v:?}"))),
        None => Err(at.schema(root, "missing attribute \"version\"".to_owned())),
    }
}

/// Element children; non-whitespace text is rejected, comments are skipped.
fn element_children<'a, 'input>(
    at: &Locator,
    el: roxmltree::Node<'a, 'input>,
) -> Result<Vec<roxmltree::Node<'a, 'input>>, XmlError> {
    let mut out = Vec::new();
    for c in el.children() {
        match c.node_type() {
            NodeType::Element => out.push(c),
            NodeType::Text if c.text().is_some_and(|t| !t.trim().is_empty()) => {
                return Err(at.schema(c, format!("unexpected text in <{}>", el.tag_name().name())));
            }
            _ => {}
        }
    }
    Ok(out)
}

fn no_children(at: &Locator, el: roxmltree::Node) -> Result<(), XmlError> {
    match element_children(at, el)?.first() {
        Some(c) => Err(at.schema(
            *c,
            format!("<{}> must be empty, found <{}>", el.tag_name().name(), c.tag_name().name()),
        )),
        None => Ok(()),
    }
}

fn attrs_only(at: &Locator, el: roxmltree::Node, allowed: &[&str]) -> Result<(), XmlError> {
    for a in el.attributes() {
        if a.namespace().is_some() || !allowed.contains(&a.name()) {
            return Err(at.schema(el, format!("unknown attribute {:?} on <{}>", a.name(), el.tag_name().name())));
        }
    }
    Ok(())
}

fn required<'a>(at: &Locator, el: roxmltree::Node<'a, '_>, name: &str) -> Result<&'a str, XmlError> {
    el.attribute(name)
        .ok_or_else(|| at.schema(el, format!("<{}> is missing attribute {name:?}", el.tag_name().name())))
}

fn non_empty(at: &Locator, el: roxmltree::Node, name: &str) -> Result<String, XmlError> {
    let v = required(at, el, name)?;
    if v.is_empty() {
        return Err(at.schema(el, format!("attribute {name:?} on <{}> must not be empty", el.tag_name().name())));
    }
    Ok(v.to_owned())
}

fn node_id(at: &Locator, el: roxmltree::Node) -> Result<NodeId, XmlError> {
    NodeId::new(required(at, el, "id")?).map_err(|e| at.schema(el, e.to_string()))
}

fn open(out: &mut String, tag: &str, attrs: &[(&str, &str)]) -> Result<(), XmlError> {
    out.push('<');
    out.push_str(tag);
    for (k, v) in attrs {
        write!(out, " {k}=\"").unwrap();
        escape_attr(out, v)?;
        out.push('"');
    }
    Ok(())
}

fn escape_attr(out: &mut String, value: &str) -> Result<(), XmlError> {
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // literal whitespace controls would be normalized to spaces by readers
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c if is_xml_char(c) => out.push(c),
            c => return Err(XmlError::Unrepresentable(c as u32)),
        }
    }
    Ok(())
}

fn is_xml_char(c: char) -> bool {
    matches!(c as u32, 0x20..=0xD7FF | 0xE000..=0xFFFD | 0x10000..=0x10FFFF)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_concept() {
        let mut g = SemanticGraph::new();
        g.add_concept("Well").unwrap();
        assert_eq!(
            to_xml(&g).unwrap(),
            r#"<semanticgraph version="1"><concept id="n1" name="Well"/></semanticgraph>"#
        );
    }

    #[test]
    fn entity_fragment() {
        let mut g = SemanticGraph::new();
        for _ in 0..3 {
            g.add_omitted();
        }
        g.add_entity("4", ["5-level degree"]).unwrap();
        let xml = to_xml(&g).unwrap();
        assert!(xml.contains(r#"<entity id="n4" value="4"><class name="5-level degree"/></entity>"#));
    }

    #[test]
    fn indexed_roles_in_order() {
        let mut g = SemanticGraph::new();
        let ev = g.add_concept("Event").unwrap();
        let a = g.add_concept("Event").unwrap();
        let b = g.add_concept("Event").unwrap();
        g.add_edge(&ev, RoleLabel::indexed("subEvent", 1), &a).unwrap();
        g.add_edge(&ev, RoleLabel::indexed("subEvent", 2), &b).unwrap();
        assert_eq!(
            to_xml(&g).unwrap(),
            concat!(
                r#"<semanticgraph version="1"><concept id="n1" name="Event">"#,
                r#"<role name="subEvent" index="1" target="n2"/><role name="subEvent" index="2" target="n3"/>"#,
                r#"</concept><concept id="n2" name="Event"/><concept id="n3" name="Event"/></semanticgraph>"#
            )
        );
    }

    #[test]
    fn empty_document() {
        let g = from_xml(r#"<semanticgraph version="1"/>"#).unwrap();
        assert!(g.is_empty());
        assert_eq!(to_xml(&g).unwrap(), r#"<semanticgraph version="1"/>"#);
    }

    #[test]
    fn escaping_round_trips() {
        let mut g = SemanticGraph::new();
        let c = g.add_concept("a&b<c>\"d'").unwrap();
        let e = g.add_entity("line1\nline2\ttab", ["x y"]).unwrap();
        g.add_edge(&c, RoleLabel::new("r&"), &e).unwrap();
        let xml = to_xml(&g).unwrap();
        assert!(xml.contains("a&amp;b&lt;c&gt;&quot;d&apos;"));
        assert_eq!(from_xml(&xml).unwrap(), g);
    }

    #[test]
    fn unrepresentable_char() {
        let mut g = SemanticGraph::new();
        g.add_concept("bell\u{7}").unwrap();
        assert_eq!(to_xml(&g), Err(XmlError::Unrepresentable(7)));
    }

    #[test]
    fn invalid_graph_is_rejected() {
        let mut g = SemanticGraph::new();
        let c = g.add_concept("X").unwrap();
        let e = g.add_entity("v", Vec::<String>::new()).unwrap();
        g.insert_edge_unchecked(Edge {
            source: e,
            label: RoleLabel::new("r"),
            target: c,
        });
        assert!(matches!(to_xml(&g), Err(XmlError::InvalidGraph(_))));
    }

    #[test]
    fn malformed_markup_has_line() {
        let err = from_xml("<semanticgraph version=\"1\">\n<concept id=\"a\" name=\"X\">\n</semanticgraph>").unwrap_err();
        assert!(matches!(err, XmlError::Malformed { .. }));
        assert!(err.line().is_some());
    }

    #[test]
    fn dangling_target_names_the_id() {
        let doc = "<semanticgraph version=\"1\">\n<concept id=\"a\" name=\"X\"><role name=\"r\" target=\"zz\"/></concept>\n</semanticgraph>";
        let err = from_xml(doc).unwrap_err();
        assert_eq!(err.line(), Some(2));
        assert!(err.to_string().contains("\"zz\""), "{err}");
    }

    #[test]
    fn schema_errors() {
        let bad = [
            r#"<semanticgraph version="2"/>"#,
            r#"<semanticgraph/>"#,
            r#"<graph version="1"/>"#,
            r#"<semanticgraph version="1"><node id="a"/></semanticgraph>"#,
            r#"<semanticgraph version="1"><concept id="a" name="X" color="red"/></semanticgraph>"#,
            r#"<semanticgraph version="1"><concept id="a" name="X"/><omitted id="a"/></semanticgraph>"#,
            r#"<semanticgraph version="1"><concept id="a" name=""/></semanticgraph>"#,
            r#"<semanticgraph version="1"><concept id="a b" name="X"/></semanticgraph>"#,
            r#"<semanticgraph version="1"><concept id="a" name="X"><role name="r" index="0" target="a"/></concept></semanticgraph>"#,
            r#"<semanticgraph version="1"><concept id="a" name="X"><class name="c"/></concept></semanticgraph>"#,
            r#"<semanticgraph version="1">text</semanticgraph>"#,
        ];
        for doc in bad {
            let err = from_xml(doc).unwrap_err();
            assert!(matches!(err, XmlError::Schema { .. }), "{doc}: {err:?}");
        }
    }

    #[test]
    fn leaf_roles_load_for_validation() {
        let doc = r#"<semanticgraph version="1"><concept id="a" name="X"/><entity id="b" value="4"><role name="r" target="a"/></entity></semanticgraph>"#;
        let g = from_xml(doc).unwrap();
        let v = validate(&g, Validation::Lax);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].code, crate::ViolationCode::EntityOutEdge);
    }

    #[test]
    fn catalogue_format() {
        let cat = ConceptCatalogue::new()
            .define_concept(ConceptDefinition::new("Bottom").role("Container").role("Contained"))
            .unwrap();
        assert_eq!(
            catalogue_to_xml(&cat).unwrap(),
            r#"<catalogue version="1"><concept name="Bottom"><role name="Container"/><role name="Contained"/></concept></catalogue>"#
        );
        assert_eq!(catalogue_to_xml(&ConceptCatalogue::new()).unwrap(), r#"<catalogue version="1"/>"#);
    }

    #[test]
    fn catalogue_round_trip() {
        let cat = crate::catalogue::bundled::well_scene()
            .define_concept(ConceptDefinition::new("Event").indexed_role("subEvent").role("id"))
            .unwrap();
        let xml = catalogue_to_xml(&cat).unwrap();
        assert_eq!(catalogue_from_xml(&xml).unwrap(), cat);
    }

    #[test]
    fn catalogue_duplicates_are_schema_errors() {
        let dup_role = r#"<catalogue version="1"><concept name="X"><role name="a"/><role name="a"/></concept></catalogue>"#;
        assert!(matches!(catalogue_from_xml(dup_role), Err(XmlError::Schema { .. })));
        let dup_concept = r#"<catalogue version="1"><concept name="X"/><concept name="X"/></catalogue>"#;
        assert!(matches!(catalogue_from_xml(dup_concept), Err(XmlError::Schema { .. })));
        let bad_flag = r#"<catalogue version="1"><concept name="X"><role name="a" indexed="yes"/></concept></catalogue>"#;
        assert!(matches!(catalogue_from_xml(bad_flag), Err(XmlError::Schema { .. })));
    }
}
