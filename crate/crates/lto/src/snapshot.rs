//! The ontology snapshot bundled into the binary.

use lto_core::{ThemeOntology, ValidationReport};

use crate::textio::parse_theme_document;

/// Theme document of the bundled snapshot.
pub const THEMES: &str = include_str!("../data/snapshot/themes.lto.txt");
/// Raw JSON manifest that ships next to [`THEMES`].
pub const MANIFEST: &str = include_str!("../data/snapshot/manifest.json");

/// Pseudo-path under which the bundled theme document is reported.
pub const SOURCE_NAME: &str = "<snapshot>/themes.lto.txt";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub version: String,
    pub class_count: usize,
    pub root: String,
    pub root_children: usize,
    pub source: String,
}

pub fn manifest() -> Manifest {
    let value: serde_json::Value = serde_json::from_str(MANIFEST).expect("bundled manifest is valid JSON");
    let text = |key: &str| value[key].as_str().unwrap_or_default().to_string();
    let count = |key: &str| value[key].as_u64().unwrap_or_default() as usize;
    Manifest {
        version: text("version"),
        class_count: count("class_count"),
        root: text("root"),
        root_children: count("root_children"),
        source: text("source"),
    }
}

/// Parses and builds the bundled snapshot.
pub fn load() -> Result<ThemeOntology, ValidationReport> {
    let (themes, diagnostics) = parse_theme_document(THEMES);
    let mut report = ValidationReport::new(diagnostics);
    if report.has_errors() {
        return Err(report);
    }
    ThemeOntology::build(themes).map_err(|built| {
        report.extend(built.issues);
        report
    })
}
