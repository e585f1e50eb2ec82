//! Structural validation plus curation lints.

use alloc::format;
use alloc::vec::Vec;

use crate::ontology::analyze;
use crate::{Code, Diagnostic, Severity, Theme};

/// Phrase that upper-level class names end with by convention.
pub const THEMATIC_SUFFIX: &str = "thematic entity";

/// Upper-level themes (this deep or shallower) are checked for the suffix.
pub const SUFFIX_MAX_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    /// Sorted by code, subject, then location.
    pub issues: Vec<Diagnostic>,
    pub error_count: usize,
    pub warning_count: usize,
}

impl ValidationReport {
    pub fn new(issues: Vec<Diagnostic>) -> Self {
        let mut report = ValidationReport::default();
        report.extend(issues);
        report
    }

    /// Adds issues, keeping the order and the counts consistent.
    pub fn extend(&mut self, issues: impl IntoIterator<Item = Diagnostic>) {
        self.issues.extend(issues);
        self.issues.sort_by(Diagnostic::report_cmp);
        self.error_count = self.issues.iter().filter(|d| d.severity == Severity::Error).count();
        self.warning_count = self.issues.len() - self.error_count;
    }

    pub fn has_errors(&self) -> bool {
        self.error_count > 0
    }

    pub fn count(&self, code: Code) -> usize {
        self.issues.iter().filter(|d| d.code == code).count()
    }
}

/// Runs every structural check `ThemeOntology::build` runs, plus lints.
///
/// Always reported: `NO_DEFINITION` for an empty definition. With
/// `strict_lint`: `NO_REFERENCE` for themes without references, and
/// `SUFFIX_CONVENTION` for upper-level themes whose name does not end in
/// "thematic entity". The suffix lint needs depths, so it only runs when the
/// structure is valid.
pub fn validate(themes: &[Theme], strict_lint: bool) -> ValidationReport {
    let mut lints = Vec::new();
    for theme in themes {
        if theme.definition.trim().is_empty() {
            lints.push(
                Diagnostic::warning(Code::NoDefinition, format!("\"{}\" has no definition", theme.name))
                    .with_subject(theme.name.as_str()),
            );
        }
        if strict_lint && theme.references.is_empty() {
            lints.push(
                Diagnostic::warning(Code::NoReference, format!("\"{}\" has no reference", theme.name))
                    .with_subject(theme.name.as_str()),
            );
        }
    }

    let analysis = analyze(themes.to_vec());
    if let (true, Some(ontology)) = (strict_lint, &analysis.ontology) {
        for theme in ontology.themes() {
            let depth = ontology.depth(&theme.name).unwrap_or(0);
            if depth <= SUFFIX_MAX_DEPTH && !theme.name.ends_with(THEMATIC_SUFFIX) {
                lints.push(
                    Diagnostic::warning(
                        Code::SuffixConvention,
                        format!(
                            "upper-level theme \"{}\" (depth {depth}) does not end in \"{THEMATIC_SUFFIX}\"",
                            theme.name
                        ),
                    )
                    .with_subject(theme.name.as_str()),
                );
            }
        }
    }

    let mut report = ValidationReport::new(analysis.issues);
    report.extend(lints);
    report
}
