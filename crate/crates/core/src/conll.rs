//! CoNLL-style sentences with cause/effect span annotations.
//!
//! Token lines carry nine tab-separated columns:
//! `ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL CAUSATION`, where CAUSATION is a
//! BIO tag over `Cause` and `Effect` (`B-Cause`, `I-Effect`, `O`). Sentences
//! are separated by blank lines. A `# lang = xx` comment sets the language
//! for the sentence it appears in and all following ones; other comments
//! are ignored.

use std::fmt;

use thiserror::Error;

use crate::graph::{NodeId, RoleLabel, SemanticGraph};

pub const DEFAULT_LANGUAGE: &str = "und";
pub const SURFACE_CLASS: &str = "UnanalysedSubtree";
const COLUMNS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalLabel {
    Cause,
    Effect,
}

impl CausalLabel {
    fn role(self) -> &'static str {
        match self {
            CausalLabel::Cause => "cause",
            CausalLabel::Effect => "effect",
        }
    }
}

impl fmt::Display for CausalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CausalLabel::Cause => "Cause",
            CausalLabel::Effect => "Effect",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BioTag {
    Begin(CausalLabel),
    Inside(CausalLabel),
    Outside,
}

impl BioTag {
    pub fn parse(s: &str) -> Option<BioTag> {
        if s == "O" {
            return Some(BioTag::Outside);
        }
        let (prefix, label) = s.split_once('-')?;
        let label = match label {
            "Cause" => CausalLabel::Cause,
            "Effect" => CausalLabel::Effect,
            _ => return None,
        };
        match prefix {
            "B" => Some(BioTag::Begin(label)),
            "I" => Some(BioTag::Inside(label)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConllToken {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: String,
    pub head: String,
    pub deprel: String,
    pub causation: BioTag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConllSentence {
    pub tokens: Vec<ConllToken>,
    pub language: String,
}

/// A maximal run of tokens sharing one causal label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub label: CausalLabel,
    /// Token positions, half-open, 0-based.
    pub start: usize,
    pub end: usize,
}

impl ConllSentence {
    /// Causal spans in sentence order.
    pub fn spans(&self) -> Vec<Span> {
        let mut spans: Vec<Span> = Vec::new();
        for (i, tok) in self.tokens.iter().enumerate() {
            match tok.causation {
                BioTag::Begin(label) => spans.push(Span { label, start: i, end: i + 1 }),
                BioTag::Inside(_) => {
                    if let Some(last) = spans.last_mut() {
                        last.end = i + 1;
                    }
                }
                BioTag::Outside => {}
            }
        }
        spans
    }

    pub fn span_text(&self, span: &Span) -> String {
        self.tokens[span.start..span.end]
            .iter()
            .map(|t| t.form.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConllError {
    #[error("line {line}: expected {COLUMNS} tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: token id {found:?}, expected {expected}")]
    TokenId { line: usize, expected: usize, found: String },
    #[error("line {line}: invalid causation tag {tag:?}")]
    BadTag { line: usize, tag: String },
    #[error("line {line}: {tag} does not continue a {label} span")]
    BrokenSpan { line: usize, tag: String, label: CausalLabel },
    #[error("line {line}: empty token form")]
    EmptyForm { line: usize },
    #[error("sentence has no causation annotation")]
    NoCausation,
}

pub fn parse_conll(text: &str) -> Result<Vec<ConllSentence>, ConllError> {
    parse_conll_with_language(text, DEFAULT_LANGUAGE)
}

/// Like [`parse_conll`], starting from `default_language` until a
/// `# lang` comment says otherwise.
pub fn parse_conll_with_language(text: &str, default_language: &str) -> Result<Vec<ConllSentence>, ConllError> {
    let mut sentences = Vec::new();
    let mut language = default_language.to_owned();
    let mut tokens: Vec<ConllToken> = Vec::new();
    let mut flush = |tokens: &mut Vec<ConllToken>, language: &str| {
        if !tokens.is_empty() {
            sentences.push(ConllSentence {
                tokens: std::mem::take(tokens),
                language: language.to_owned(),
            });
        }
    };
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut tokens, &language);
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "lang" && !value.trim().is_empty() {
                    language = value.trim().to_owned();
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != COLUMNS {
            return Err(ConllError::ColumnCount {
                line: line_no,
                found: cols.len(),
            });
        }
        let expected = tokens.len() + 1;
        if cols[0].parse::<usize>().ok() != Some(expected) {
            return Err(ConllError::TokenId {
                line: line_no,
                expected,
                found: cols[0].to_owned(),
            });
        }
        if cols[1].is_empty() {
            return Err(ConllError::EmptyForm { line: line_no });
        }
        let tag = BioTag::parse(cols[8]).ok_or_else(|| ConllError::BadTag {
            line: line_no,
            tag: cols[8].to_owned(),
        })?;
        if let BioTag::Inside(label) = tag {
            let continues = matches!(
                tokens.last().map(|t| t.causation),
                Some(BioTag::Begin(l) | BioTag::Inside(l)) if l == label
            );
            if !continues {
                return Err(ConllError::BrokenSpan {
                    line: line_no,
                    tag: cols[8].to_owned(),
                    label,
                });
            }
        }
        tokens.push(ConllToken {
            id: expected,
            form: cols[1].to_owned(),
            lemma: cols[2].to_owned(),
            upos: cols[3].to_owned(),
            xpos: cols[4].to_owned(),
            feats: cols[5].to_owned(),
            head: cols[6].to_owned(),
            deprel: cols[7].to_owned(),
            causation: tag,
        });
    }
    flush(&mut tokens, &language);
    Ok(sentences)
}

/// Builds the Sentence / Causation / LanguageDoc graph of one sentence.
///
/// Span texts become `UnanalysedSubtree` entities shared by the Causation
/// concept (`cause[i]`, `effect[i]`) and the LanguageDoc concept
/// (`element[i]`, sentence order). A label without any span is filled by an
/// omitted node.
pub fn causation_to_graph(sentence: &ConllSentence) -> Result<SemanticGraph, ConllError> {
    let mut graph = SemanticGraph::new();
    causation_into(sentence, &mut graph)?;
    Ok(graph)
}

/// Adds the graph of `sentence` to `graph`, returning the Sentence node.
pub fn causation_into(sentence: &ConllSentence, graph: &mut SemanticGraph) -> Result<NodeId, ConllError> {
    let spans = sentence.spans();
    if spans.is_empty() {
        return Err(ConllError::NoCausation);
    }
    let top = graph.add_concept("Sentence").expect("non-empty");
    let causation = graph.add_concept("Causation").expect("non-empty");
    let doc = graph.add_concept("LanguageDoc").expect("non-empty");
    let language = graph
        .add_entity(sentence.language.clone(), Vec::<String>::new())
        .expect("language codes are non-empty");
    let edge = |g: &mut SemanticGraph, s: &NodeId, l: RoleLabel, t: &NodeId| {
        g.add_edge(s, l, t).expect("roles are assigned uniquely");
    };
    edge(graph, &top, RoleLabel::new("content"), &causation);
    edge(graph, &top, RoleLabel::new("source"), &doc);
    edge(graph, &doc, RoleLabel::new("language"), &language);

    let mut counts = [0u32; 2];
    for (i, span) in spans.iter().enumerate() {
        let text = graph
            .add_entity(sentence.span_text(span), [SURFACE_CLASS])
            .expect("forms are non-empty");
        let slot = &mut counts[span.label as usize];
        *slot += 1;
        edge(graph, &causation, RoleLabel::indexed(span.label.role(), *slot), &text);
        edge(graph, &doc, RoleLabel::indexed("element", i as u32 + 1), &text);
    }
    for label in [CausalLabel::Cause, CausalLabel::Effect] {
        if counts[label as usize] == 0 {
            let gap = graph.add_omitted();
            edge(graph, &causation, RoleLabel::indexed(label.role(), 1), &gap);
        }
    }
    Ok(top)
}
