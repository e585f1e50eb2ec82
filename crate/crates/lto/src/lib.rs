//! File formats, corpus loading, OWL export and the `lto` command line for
//! the Literary Theme Ontology. The model and statistics live in `lto-core`.

pub mod cli;
pub mod snapshot;
pub mod textio;

pub use lto_core as core;
