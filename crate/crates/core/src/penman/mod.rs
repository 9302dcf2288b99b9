//! PENMAN notation: parsing and conversion of AMR and UMR structures.

mod amr;
mod parser;
mod umr;

pub use amr::{amr_into, amr_to_graph, amrs_to_graph};
pub use parser::{parse_amr_file, parse_penman, parse_penman_with, PenmanError, PenmanErrorKind};
pub use umr::{parse_umr, promoted_tokens, umr_to_graph, DocRelation, UmrDocument, UmrError};

use std::collections::HashMap;

/// A constant slot filler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constant {
    /// Quoted literal, stored without quotes.
    String(String),
    Number(String),
    /// Bare symbol such as `-`, `imperative` or `past`.
    Symbol(String),
}

impl Constant {
    pub fn text(&self) -> &str {
        match self {
            Constant::String(s) | Constant::Number(s) | Constant::Symbol(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotValue {
    /// A nested node definition introducing this variable.
    Node(String),
    /// A reference to a variable defined elsewhere in the tree.
    Reference(String),
    Constant(Constant),
}

/// One `:role value` pair, owned by the variable of the enclosing node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub owner: String,
    pub role: String,
    pub value: SlotValue,
}

/// Parsed PENMAN expression.
///
/// Variables are kept in definition order and slots in surface order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenmanTree {
    root: String,
    variables: Vec<(String, String)>,
    slots: Vec<Slot>,
}

impl PenmanTree {
    pub fn root(&self) -> &str {
        &self.root
    }

    /// `(variable, concept)` pairs in definition order.
    pub fn variables(&self) -> &[(String, String)] {
        &self.variables
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn concept(&self, var: &str) -> Option<&str> {
        self.variables.iter().find(|(v, _)| v == var).map(|(_, c)| c.as_str())
    }

    pub fn is_variable(&self, token: &str) -> bool {
        self.variables.iter().any(|(v, _)| v == token)
    }

    /// Number of constant slot fillers.
    pub fn constant_count(&self) -> usize {
        self.slots
            .iter()
            .filter(|s| matches!(s.value, SlotValue::Constant(_)))
            .count()
    }

    /// How often each variable is the target of a reference slot.
    pub fn reference_counts(&self) -> HashMap<&str, usize> {
        let mut counts = HashMap::new();
        for s in &self.slots {
            if let SlotValue::Reference(v) = &s.value {
                *counts.entry(v.as_str()).or_default() += 1;
            }
        }
        counts
    }
}
