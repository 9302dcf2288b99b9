//! Concept catalogues: the declared roles of each concept.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleDefinition {
    pub name: String,
    pub indexed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptDefinition {
    pub name: String,
    pub roles: Vec<RoleDefinition>,
    pub description: Option<String>,
}

impl ConceptDefinition {
    pub fn new(name: impl Into<String>) -> Self {
        ConceptDefinition {
            name: name.into(),
            roles: Vec::new(),
            description: None,
        }
    }

    pub fn role(mut self, name: impl Into<String>) -> Self {
        self.roles.push(RoleDefinition {
            name: name.into(),
            indexed: false,
        });
        self
    }

    pub fn indexed_role(mut self, name: impl Into<String>) -> Self {
        self.roles.push(RoleDefinition {
            name: name.into(),
            indexed: true,
        });
        self
    }

    pub fn describe(mut self, text: impl Into<String>) -> Self {
        self.description = Some(text.into());
        self
    }

    pub fn lookup_role(&self, name: &str) -> Option<&RoleDefinition> {
        self.roles.iter().find(|r| r.name == name)
    }
}

/// `Name(role, indexed[])`
impl fmt::Display for ConceptDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, r) in self.roles.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&r.name)?;
            if r.indexed {
                f.write_str("[]")?;
            }
        }
        f.write_str(")")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogueError {
    #[error("concept {0:?} is already defined")]
    DuplicateConcept(String),
    #[error("concept {concept:?} declares role {role:?} more than once")]
    DuplicateRole { concept: String, role: String },
    #[error("concept name must not be empty")]
    EmptyConceptName,
    #[error("concept {0:?} declares a role with an empty name")]
    EmptyRoleName(String),
}

/// Registry of concept definitions keyed by concept name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptCatalogue {
    entries: BTreeMap<String, ConceptDefinition>,
}

impl ConceptCatalogue {
    pub fn new() -> Self {
        ConceptCatalogue::default()
    }

    /// Adds a definition in place.
    pub fn define(&mut self, def: ConceptDefinition) -> Result<(), CatalogueError> {
        if def.name.is_empty() {
            return Err(CatalogueError::EmptyConceptName);
        }
        for (i, role) in def.roles.iter().enumerate() {
            if role.name.is_empty() {
                return Err(CatalogueError::EmptyRoleName(def.name.clone()));
            }
            if def.roles[..i].iter().any(|r| r.name == role.name) {
                return Err(CatalogueError::DuplicateRole {
                    concept: def.name.clone(),
                    role: role.name.clone(),
                });
            }
        }
        if self.entries.contains_key(&def.name) {
            return Err(CatalogueError::DuplicateConcept(def.name));
        }
        self.entries.insert(def.name.clone(), def);
        Ok(())
    }

    /// Returns a new catalogue with `def` added, leaving `self` untouched.
    pub fn define_concept(&self, def: ConceptDefinition) -> Result<ConceptCatalogue, CatalogueError> {
        let mut next = self.clone();
        next.define(def)?;
        Ok(next)
    }

    pub fn lookup(&self, name: &str) -> Option<&ConceptDefinition> {
        self.entries.get(name)
    }

    /// Definitions in ascending name order.
    pub fn iter(&self) -> impl Iterator<Item = &ConceptDefinition> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Small catalogues shipped with the toolkit.
pub mod bundled {
    use super::{ConceptCatalogue, ConceptDefinition};

    /// Concepts of the "room at the bottom of the well" scene.
    pub fn well_scene() -> ConceptCatalogue {
        build([
            ConceptDefinition::new("Bottom")
                .role("Container")
                .role("Contained")
                .describe("Contained sits at the bottom of Container"),
            ConceptDefinition::new("Lighting")
                .role("Object")
                .role("Degree")
                .describe("Object is lit to Degree"),
            ConceptDefinition::new("IsA")
                .role("A")
                .role("B")
                .role("Degree")
                .describe("A is equal to B with probability Degree"),
            ConceptDefinition::new("Well"),
            ConceptDefinition::new("Room"),
            ConceptDefinition::new("Office"),
        ])
    }

    /// Concepts produced by the causation converter.
    pub fn causation() -> ConceptCatalogue {
        build([
            ConceptDefinition::new("Sentence").role("content").role("source"),
            ConceptDefinition::new("Causation")
                .indexed_role("cause")
                .indexed_role("effect"),
            ConceptDefinition::new("LanguageDoc")
                .role("language")
                .indexed_role("element"),
        ])
    }

    /// Looks up a bundled catalogue by name (`well-scene`, `causation`).
    pub fn by_name(name: &str) -> Option<ConceptCatalogue> {
        match name {
            "well-scene" => Some(well_scene()),
            "causation" => Some(causation()),
            _ => None,
        }
    }

    pub const NAMES: &[&str] = &["well-scene", "causation"];

    fn build(defs: impl IntoIterator<Item = ConceptDefinition>) -> ConceptCatalogue {
        let mut cat = ConceptCatalogue::new();
        for d in defs {
            cat.define(d).expect("bundled catalogue is consistent");
        }
        cat
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn define_and_lookup() {
        let cat = ConceptCatalogue::new()
            .define_concept(ConceptDefinition::new("Bottom").role("Container").role("Contained"))
            .unwrap();
        let bottom = cat.lookup("Bottom").unwrap();
        assert_eq!(bottom.roles.len(), 2);
        assert!(cat.lookup("Top").is_none());
    }

    #[test]
    fn indexed_flag_is_kept() {
        let cat = ConceptCatalogue::new()
            .define_concept(ConceptDefinition::new("Event").indexed_role("subEvent"))
            .unwrap();
        assert!(cat.lookup("Event").unwrap().lookup_role("subEvent").unwrap().indexed);
    }

    #[test]
    fn redefinition_is_rejected() {
        let cat = ConceptCatalogue::new()
            .define_concept(ConceptDefinition::new("Bottom"))
            .unwrap();
        assert_eq!(
            cat.define_concept(ConceptDefinition::new("Bottom").role("X")),
            Err(CatalogueError::DuplicateConcept("Bottom".into()))
        );
        // original untouched
        assert!(cat.lookup("Bottom").unwrap().roles.is_empty());
    }

    #[test]
    fn duplicate_role_is_rejected() {
        let mut cat = ConceptCatalogue::new();
        assert!(matches!(
            cat.define(ConceptDefinition::new("X").role("a").indexed_role("a")),
            Err(CatalogueError::DuplicateRole { .. })
        ));
        assert!(cat.is_empty());
    }

    #[test]
    fn signature_display() {
        let d = ConceptDefinition::new("LanguageDoc").role("language").indexed_role("element");
        assert_eq!(d.to_string(), "LanguageDoc(language, element[])");
    }
}
