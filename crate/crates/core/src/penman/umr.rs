//! UMR documents: sentence-level PENMAN graphs plus document-level relations.
//!
//! Input layout: PENMAN blocks separated by blank lines, and document-level
//! blocks introduced by a `# doc` line followed by one `(source rel target)`
//! triple per line.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::graph::{NodeId, RoleSlots, SemanticGraph};

use super::amr::amr_into;
use super::parser::{blocks, parse_penman_with, PenmanError, PenmanErrorKind};
use super::{Constant, PenmanTree, SlotValue};

/// A document-level `(source relation target)` attachment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocRelation {
    pub source: String,
    pub relation: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UmrDocument {
    pub sentences: Vec<PenmanTree>,
    pub relations: Vec<DocRelation>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UmrError {
    #[error(transparent)]
    Parse(#[from] PenmanError),
    #[error("offset {offset}: malformed document-level relation {line:?}")]
    BadRelation { offset: usize, line: String },
    #[error("document-level token {0:?} refers to no variable or constant")]
    UnresolvedToken(String),
    #[error("document-level token {0:?} names a variable defined in several sentences")]
    AmbiguousToken(String),
}

/// Parses a UMR document.
///
/// Tokens named in document-level blocks may appear in sentence graphs as
/// bare constants even when they look like variables.
pub fn parse_umr(text: &str) -> Result<UmrDocument, UmrError> {
    let mut relations = Vec::new();
    let mut sentence_blocks = Vec::new();
    for (offset, block) in blocks(text) {
        let mut lines = block.split_inclusive('\n');
        let is_doc = block.lines().next().is_some_and(|l| l.trim() == "# doc");
        if !is_doc {
            sentence_blocks.push((offset, block));
            continue;
        }
        let mut at = offset + lines.next().map_or(0, str::len);
        for line in lines {
            let trimmed = line.trim();
            if !trimmed.is_empty() && !trimmed.starts_with('#') {
                relations.push(parse_relation(trimmed).ok_or_else(|| UmrError::BadRelation {
                    offset: at,
                    line: trimmed.to_owned(),
                })?);
            }
            at += line.len();
        }
    }

    let free: HashSet<String> = relations
        .iter()
        .flat_map(|r| [r.source.clone(), r.target.clone()])
        .collect();
    let sentences = sentence_blocks
        .into_iter()
        .map(|(offset, block)| {
            parse_penman_with(block, &free).map_err(|e| PenmanError {
                offset: e.offset + offset,
                kind: e.kind,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if sentences.is_empty() && relations.is_empty() {
        return Err(PenmanError {
            offset: 0,
            kind: PenmanErrorKind::Empty,
        }
        .into());
    }
    Ok(UmrDocument { sentences, relations })
}

fn parse_relation(line: &str) -> Option<DocRelation> {
    let inner = line.strip_prefix('(')?.strip_suffix(')')?;
    let parts: Vec<&str> = inner.split_whitespace().collect();
    let [source, relation, target] = parts[..] else {
        return None;
    };
    let relation = relation.strip_prefix(':').unwrap_or(relation);
    if relation.is_empty() {
        return None;
    }
    Some(DocRelation {
        source: source.to_owned(),
        relation: relation.to_owned(),
        target: target.to_owned(),
    })
}

/// Converts a UMR document into one graph.
///
/// Sentences are converted as AMR and combined by disjoint union. Constants
/// that are the source of a document-level relation become concepts named by
/// their token, so they can own the relation edge while keeping the
/// sentence-level role edge that points at them. Constants that are only
/// relation targets stay entities. A token named by document-level
/// relations maps to a single node wherever it occurs. Each relation
/// (including coreference) becomes an edge; nodes are never unified.
pub fn umr_to_graph(doc: &UmrDocument) -> Result<SemanticGraph, UmrError> {
    let sources: HashSet<&str> = doc.relations.iter().map(|r| r.source.as_str()).collect();
    let tokens: HashSet<&str> = doc
        .relations
        .iter()
        .flat_map(|r| [r.source.as_str(), r.target.as_str()])
        .collect();

    let mut var_owners: HashMap<&str, usize> = HashMap::new();
    for tree in &doc.sentences {
        for (v, _) in tree.variables() {
            *var_owners.entry(v.as_str()).or_default() += 1;
        }
    }
    for t in &tokens {
        if var_owners.get(t).copied().unwrap_or(0) > 1 {
            return Err(UmrError::AmbiguousToken((*t).to_owned()));
        }
    }

    let mut graph = SemanticGraph::new();
    let mut slots = RoleSlots::new();
    let mut resolved: BTreeMap<String, NodeId> = BTreeMap::new();
    for tree in &doc.sentences {
        let vars = amr_into(tree, &mut graph, &mut slots, |g, c| {
            let text = c.text();
            if matches!(c, Constant::String(_)) || !tokens.contains(text) {
                return None;
            }
            if let Some(id) = resolved.get(text) {
                return Some(id.clone());
            }
            let id = if sources.contains(text) {
                g.add_concept(text)
            } else {
                g.add_entity(text, Vec::<String>::new())
            }
            .expect("tokens are non-empty");
            resolved.insert(text.to_owned(), id.clone());
            Some(id)
        });
        for (var, id) in vars {
            if tokens.contains(var.as_str()) {
                resolved.insert(var, id);
            }
        }
    }

    for rel in &doc.relations {
        let source = lookup(&resolved, &rel.source)?;
        let target = lookup(&resolved, &rel.target)?;
        slots.push(source, rel.relation.clone(), target);
    }
    slots
        .commit(&mut graph)
        .expect("slot indices are unique by construction");
    Ok(graph)
}

fn lookup(resolved: &BTreeMap<String, NodeId>, token: &str) -> Result<NodeId, UmrError> {
    resolved
        .get(token)
        .cloned()
        .ok_or_else(|| UmrError::UnresolvedToken(token.to_owned()))
}

/// Constant tokens of `doc` that are promoted to concepts.
pub fn promoted_tokens(doc: &UmrDocument) -> HashSet<String> {
    let sources: HashSet<&str> = doc.relations.iter().map(|r| r.source.as_str()).collect();
    doc.sentences
        .iter()
        .flat_map(|t| t.slots())
        .filter_map(|s| match &s.value {
            SlotValue::Constant(c @ (Constant::Symbol(_) | Constant::Number(_))) if sources.contains(c.text()) => {
                Some(c.text().to_owned())
            }
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Node, RoleLabel};
    use crate::penman::{amrs_to_graph, parse_amr_file};
    use crate::validate::Validation;

    const SNIPPET: &str = "\
(s1t / taste-01
    :ARG0 (s1p / person)
    :temporal s1t2
    :aspect performance)

# doc
(s1t2 contained s1t)
";

    #[test]
    fn no_document_blocks_matches_amr() {
        let text = "(a / A :r (b / B))\n\n(c / C :q -)\n";
        let doc = parse_umr(text).unwrap();
        assert!(doc.relations.is_empty());
        let g = umr_to_graph(&doc).unwrap();
        assert_eq!(g, amrs_to_graph(&parse_amr_file(text).unwrap()));
    }

    #[test]
    fn promoted_token_keeps_both_roles() {
        let doc = parse_umr(SNIPPET).unwrap();
        assert_eq!(doc.relations.len(), 1);
        let g = umr_to_graph(&doc).unwrap();
        let t2 = g.concepts_named("s1t2").next().unwrap().clone();
        let taste = g.concepts_named("taste-01").next().unwrap().clone();
        assert_eq!(g.role_target(&taste, &RoleLabel::new("temporal")), Some(&t2));
        assert_eq!(g.role_target(&t2, &RoleLabel::new("contained")), Some(&taste));
        assert!(g.validate(Validation::Lax).is_empty());
        // plain fillers stay entities
        let aspect = g.role_target(&taste, &RoleLabel::new("aspect")).unwrap();
        assert!(matches!(g.node(aspect), Some(Node::Entity { value, .. }) if value == "performance"));
        assert_eq!(promoted_tokens(&doc), HashSet::from(["s1t2".to_owned()]));
    }

    #[test]
    fn unresolved_token() {
        let doc = parse_umr("(s1t / taste-01)\n\n# doc\n(dct before s1t)\n").unwrap();
        assert_eq!(umr_to_graph(&doc), Err(UmrError::UnresolvedToken("dct".into())));
    }

    #[test]
    fn ambiguous_token() {
        let doc = parse_umr("(x1 / a)\n\n(x1 / b)\n\n# doc\n(x1 same-entity x1)\n").unwrap();
        assert_eq!(umr_to_graph(&doc), Err(UmrError::AmbiguousToken("x1".into())));
    }

    #[test]
    fn bad_relation_line() {
        let err = parse_umr("(a / A)\n\n# doc\n(a before)\n").unwrap_err();
        assert!(matches!(err, UmrError::BadRelation { offset: 15, .. }), "{err:?}");
    }

    #[test]
    fn coreference_is_an_edge() {
        let doc = parse_umr("(s1p / person)\n\n(s2p / person)\n\n# doc\n(s2p :same-entity s1p)\n").unwrap();
        let g = umr_to_graph(&doc).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edges()[0].label.name(), "same-entity");
    }

    #[test]
    fn repeated_relations_are_indexed() {
        let doc = parse_umr("(s1e / a)\n\n(s2e / b)\n\n(s3e / c)\n\n# doc\n(s1e before s2e)\n(s1e before s3e)\n").unwrap();
        let g = umr_to_graph(&doc).unwrap();
        let labels: Vec<String> = g.edges().iter().map(|e| e.label.to_string()).collect();
        assert_eq!(labels, ["before[1]", "before[2]"]);
    }
}
