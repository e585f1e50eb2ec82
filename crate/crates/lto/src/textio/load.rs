//! Corpus loading: parse every file, build the ontology, and cross-check
//! story annotations against it.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lto_core::{
    validate, AnnotatedCorpus, Code, Diagnostic, StoryEntry, Theme, ThemeOntology, ValidationReport,
};

use super::stories::parse_stories_located;
use super::themes::parse_themes_located;

/// A named document held in memory.
#[derive(Debug, Clone)]
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Source { name: name.into(), text: text.into() }
    }

    pub fn read(path: &Path) -> Result<Self, LoadError> {
        let bytes = std::fs::read(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
        let text = String::from_utf8(bytes).map_err(|_| LoadError::Encoding { path: path.to_path_buf() })?;
        Ok(Source::new(path.display().to_string(), text))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{} is not valid UTF-8", path.display())]
    Encoding { path: PathBuf },
    #[error("the ontology has {} structural error(s)", report.error_count)]
    Ontology {
        /// Structural issues plus parse diagnostics, located where possible.
        report: ValidationReport,
    },
}

#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub ontology: ThemeOntology,
    pub corpus: AnnotatedCorpus,
    /// Parse and cross-check diagnostics; none of them is fatal.
    pub diagnostics: Vec<Diagnostic>,
}

pub fn read_sources(paths: &[impl AsRef<Path>]) -> Result<Vec<Source>, LoadError> {
    paths.iter().map(|p| Source::read(p.as_ref())).collect()
}

pub fn load_corpus(theme_paths: &[impl AsRef<Path>], story_paths: &[impl AsRef<Path>]) -> Result<LoadedCorpus, LoadError> {
    load_corpus_from_sources(&read_sources(theme_paths)?, &read_sources(story_paths)?)
}

struct ThemeSet {
    themes: Vec<Theme>,
    locations: BTreeMap<String, (String, usize)>,
    diagnostics: Vec<Diagnostic>,
}

fn parse_theme_sources(sources: &[Source]) -> ThemeSet {
    let mut set = ThemeSet { themes: Vec::new(), locations: BTreeMap::new(), diagnostics: Vec::new() };
    for source in sources {
        let parsed = parse_themes_located(&source.text);
        for (theme, line) in parsed.themes.into_iter().zip(parsed.lines) {
            set.locations
                .entry(theme.name.to_string())
                .or_insert_with(|| (source.name.clone(), line));
            set.themes.push(theme);
        }
        set.diagnostics
            .extend(parsed.diagnostics.into_iter().map(|d| d.in_file(source.name.clone())));
    }
    set
}

/// Points subject-only diagnostics at the defining block of their theme.
fn locate(diagnostics: Vec<Diagnostic>, locations: &BTreeMap<String, (String, usize)>) -> Vec<Diagnostic> {
    diagnostics
        .into_iter()
        .map(|d| match (&d.file, d.subject.as_ref().and_then(|s| locations.get(s))) {
            (None, Some((file, line))) => d.in_file(file.clone()).at_line(*line),
            _ => d,
        })
        .collect()
}

pub fn load_corpus_from_sources(theme_sources: &[Source], story_sources: &[Source]) -> Result<LoadedCorpus, LoadError> {
    let set = parse_theme_sources(theme_sources);
    let ontology = match ThemeOntology::build(set.themes) {
        Ok(ontology) => ontology,
        Err(report) => {
            let mut located = ValidationReport::new(locate(report.issues, &set.locations));
            located.extend(set.diagnostics);
            return Err(LoadError::Ontology { report: located });
        }
    };
    let mut diagnostics = set.diagnostics;
    let corpus = assemble_corpus(&ontology, story_sources, &mut diagnostics);
    diagnostics.sort_by(Diagnostic::report_cmp);
    Ok(LoadedCorpus { ontology, corpus, diagnostics })
}

fn assemble_corpus(ontology: &ThemeOntology, sources: &[Source], diagnostics: &mut Vec<Diagnostic>) -> AnnotatedCorpus {
    let mut corpus = AnnotatedCorpus::new();
    for source in sources {
        let parsed = parse_stories_located(&source.text);
        diagnostics.extend(parsed.diagnostics.into_iter().map(|d| d.in_file(source.name.clone())));
        for (story, line) in parsed.stories.into_iter().zip(parsed.lines) {
            let story = cross_check(ontology, story, diagnostics, &source.name, line);
            if let Err(dup) = corpus.insert(story) {
                diagnostics.push(dup.in_file(source.name.clone()).at_line(line));
            }
        }
    }
    corpus
}

/// Resolves aliases to theme names and drops annotations naming unknown themes.
fn cross_check(
    ontology: &ThemeOntology,
    mut story: StoryEntry,
    diagnostics: &mut Vec<Diagnostic>,
    file: &str,
    line: usize,
) -> StoryEntry {
    let id = story.story_id.clone();
    story.annotations.retain_mut(|annotation| match ontology.resolve(&annotation.theme) {
        Ok(name) => {
            annotation.theme = name.clone();
            true
        }
        Err(_) => {
            diagnostics.push(
                Diagnostic::warning(
                    Code::UnknownTheme,
                    format!("story {id} names unknown theme \"{}\"; annotation dropped", annotation.theme),
                )
                .with_subject(id.as_str())
                .in_file(file)
                .at_line(line),
            );
            false
        }
    });
    diagnostics.extend(story.dedup_annotations().into_iter().map(|d| d.in_file(file).at_line(line)));
    story.sort_annotations();
    story
}

/// Validation over documents: structural checks and lints on the themes,
/// parse diagnostics, and, when the ontology builds, the story cross-check.
#[derive(Debug, Clone)]
pub struct FileValidation {
    pub theme_count: usize,
    pub story_count: usize,
    pub report: ValidationReport,
}

pub fn validate_sources(theme_sources: &[Source], story_sources: &[Source], strict_lint: bool) -> FileValidation {
    let set = parse_theme_sources(theme_sources);
    let lint = validate(&set.themes, strict_lint);
    let mut report = ValidationReport::new(locate(lint.issues, &set.locations));
    report.extend(set.diagnostics);
    let theme_count = set.themes.len();

    let mut story_count = 0;
    if let Ok(ontology) = ThemeOntology::build(set.themes) {
        let mut story_diagnostics = Vec::new();
        story_count = assemble_corpus(&ontology, story_sources, &mut story_diagnostics).len();
        report.extend(story_diagnostics);
    }
    FileValidation { theme_count, story_count, report }
}
