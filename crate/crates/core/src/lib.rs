//! Core model and analytics for the Literary Theme Ontology.
//!
//! The ontology is a rooted is-a DAG of named theme classes. This crate holds
//! the validated in-memory model ([`ThemeOntology`]), closure queries over it,
//! structural validation, the story-annotation model, and the ontology-aware
//! statistics used for retrieval (enrichment, differential usage, similarity,
//! recommendation, clustering).
//!
//! Everything here is pure computation over owned data and builds without
//! `std`; file formats and IO live in the companion `lto` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analytics;
pub mod corpus;
pub mod diagnostic;
mod error;
pub mod exact;
mod name;
pub mod ontology;
mod theme;
pub mod validate;

pub use corpus::{AnnotatedCorpus, Annotation, StoryEntry, StoryId, Tier};
pub use diagnostic::{Code, Diagnostic, Severity};
pub use error::Error;
pub use name::{NameError, ThemeName};
pub use ontology::{MatchField, OntologyStats, SearchHit, ThemeOntology};
pub use theme::Theme;
pub use validate::{validate, ValidationReport};
