//! Text formats: theme and story documents, corpus loading, OWL export.

mod block;
mod load;
mod owl;
mod stories;
mod themes;

pub use load::{
    load_corpus, load_corpus_from_sources, read_sources, validate_sources, FileValidation, LoadError,
    LoadedCorpus, Source,
};
pub use owl::{class_iri, export_owl, iri_fragment, BFO_ANCHOR, IRI_BASE, ONTOLOGY_IRI};
pub use stories::{
    parse_stories_located, parse_story_document, serialize_story_document, ParsedStories, STORY_FIELDS,
};
pub use themes::{
    parse_theme_document, parse_themes_located, serialize_theme_document, ParsedThemes, THEME_FIELDS,
};
