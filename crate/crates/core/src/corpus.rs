//! Stories, their tiered theme annotations, and story collections.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::fmt;

use crate::{Code, Diagnostic, ThemeName};

/// A story identifier: a non-empty token without whitespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StoryId(String);

impl StoryId {
    pub fn new(raw: &str) -> Option<Self> {
        (!raw.is_empty() && !raw.chars().any(char::is_whitespace)).then(|| StoryId(raw.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for StoryId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

/// How prominent a theme is in a story. Declared strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tier {
    Choice,
    Major,
    Minor,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Choice, Tier::Major, Tier::Minor];

    /// Similarity weight: choice 3, major 2, minor 1.
    pub fn weight(self) -> u32 {
        match self {
            Tier::Choice => 3,
            Tier::Major => 2,
            Tier::Minor => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Choice => "choice",
            Tier::Major => "major",
            Tier::Minor => "minor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Annotation {
    pub theme: ThemeName,
    pub tier: Tier,
    pub comment: Option<String>,
}

impl Annotation {
    pub fn new(theme: ThemeName, tier: Tier) -> Self {
        Annotation { theme, tier, comment: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoryEntry {
    pub story_id: StoryId,
    pub title: String,
    /// ISO-8601 date, a year, or a year range; empty when unknown.
    pub date: String,
    pub collection: String,
    pub description: String,
    pub annotations: Vec<Annotation>,
}

impl StoryEntry {
    pub fn new(story_id: StoryId) -> Self {
        StoryEntry {
            story_id,
            title: String::new(),
            date: String::new(),
            collection: String::new(),
            description: String::new(),
            annotations: Vec::new(),
        }
    }

    pub fn annotate(mut self, theme: ThemeName, tier: Tier) -> Self {
        self.annotations.push(Annotation::new(theme, tier));
        self
    }

    /// Drops repeated themes, keeping the first occurrence, and returns one
    /// `DUP_ANNOTATION` warning per dropped entry.
    pub fn dedup_annotations(&mut self) -> Vec<Diagnostic> {
        let mut seen = BTreeSet::new();
        let mut warnings = Vec::new();
        let story = &self.story_id;
        self.annotations.retain(|a| {
            if seen.insert(a.theme.clone()) {
                return true;
            }
            warnings.push(
                Diagnostic::warning(
                    Code::DupAnnotation,
                    format!("\"{}\" annotated more than once on {story}; first kept", a.theme),
                )
                .with_subject(story.as_str()),
            );
            false
        });
        warnings
    }

    /// Canonical annotation order: tier strongest first, then theme name.
    pub fn sort_annotations(&mut self) {
        self.annotations.sort_by(|a, b| a.tier.cmp(&b.tier).then_with(|| a.theme.cmp(&b.theme)));
    }

    pub fn annotation(&self, theme: &str) -> Option<&Annotation> {
        self.annotations.iter().find(|a| a.theme.as_str() == theme)
    }
}

/// Stories keyed by id, with collection membership derived from each story's
/// `collection` field.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotatedCorpus {
    stories: BTreeMap<StoryId, StoryEntry>,
    collections: BTreeMap<String, BTreeSet<StoryId>>,
}

impl AnnotatedCorpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a corpus, reporting `DUP_STORY` for every repeated id. The first
    /// story with a given id is kept.
    pub fn from_stories(stories: impl IntoIterator<Item = StoryEntry>) -> (Self, Vec<Diagnostic>) {
        let mut corpus = Self::new();
        let mut issues = Vec::new();
        for story in stories {
            if let Err(dup) = corpus.insert(story) {
                issues.push(dup);
            }
        }
        (corpus, issues)
    }

    pub fn insert(&mut self, story: StoryEntry) -> Result<(), Diagnostic> {
        if self.stories.contains_key(&story.story_id) {
            return Err(Diagnostic::error(
                Code::DupStory,
                format!("story id {} is used more than once", story.story_id),
            )
            .with_subject(story.story_id.as_str()));
        }
        if !story.collection.is_empty() {
            self.collections
                .entry(story.collection.clone())
                .or_default()
                .insert(story.story_id.clone());
        }
        self.stories.insert(story.story_id.clone(), story);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.stories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stories.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&StoryEntry> {
        self.stories.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.stories.contains_key(id)
    }

    /// Stories in id order.
    pub fn stories(&self) -> impl ExactSizeIterator<Item = &StoryEntry> + '_ {
        self.stories.values()
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = &StoryId> + '_ {
        self.stories.keys()
    }

    pub fn collections(&self) -> &BTreeMap<String, BTreeSet<StoryId>> {
        &self.collections
    }

    pub fn into_stories(self) -> impl Iterator<Item = StoryEntry> {
        self.stories.into_values()
    }
}
