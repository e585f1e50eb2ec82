//! Story documents: one block per story, annotations grouped by tier.

use std::collections::BTreeSet;

use lto_core::{Annotation, Code, Diagnostic, StoryEntry, StoryId, ThemeName, Tier};

use super::block::{parse_blocks, text_lines, write_block, RawBlock};

pub const STORY_FIELDS: [&str; 7] = [
    "Title",
    "Date",
    "Collection",
    "Description",
    "Choice Themes",
    "Major Themes",
    "Minor Themes",
];

fn tier_field(tier: Tier) -> &'static str {
    match tier {
        Tier::Choice => "Choice Themes",
        Tier::Major => "Major Themes",
        Tier::Minor => "Minor Themes",
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedStories {
    pub stories: Vec<StoryEntry>,
    pub lines: Vec<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn parse_story_document(text: &str) -> (Vec<StoryEntry>, Vec<Diagnostic>) {
    let parsed = parse_stories_located(text);
    (parsed.stories, parsed.diagnostics)
}

/// Parses every well-formed story block. A theme repeated within a story is
/// kept at its first occurrence with a `DUP_ANNOTATION` warning. Annotations
/// come back in canonical order (tier, then theme).
pub fn parse_stories_located(text: &str) -> ParsedStories {
    let (blocks, mut diagnostics) = parse_blocks(text);
    let mut parsed = ParsedStories::default();
    for block in blocks {
        if let Some(story) = story_from_block(&block, &mut diagnostics) {
            parsed.stories.push(story);
            parsed.lines.push(block.line);
        }
    }
    parsed.diagnostics = diagnostics;
    parsed
}

fn story_from_block(block: &RawBlock<'_>, diagnostics: &mut Vec<Diagnostic>) -> Option<StoryEntry> {
    let Some(id) = StoryId::new(block.header) else {
        diagnostics.push(
            Diagnostic::error(Code::BadStoryId, format!("story id \"{}\" must be a single token", block.header))
                .at_line(block.line),
        );
        return None;
    };
    let mut story = StoryEntry::new(id.clone());
    let mut seen_fields = BTreeSet::new();
    let mut dup_lines = Vec::new();

    for section in &block.sections {
        if !seen_fields.insert(section.field) {
            diagnostics.push(
                Diagnostic::warning(Code::DupSection, format!("section \"{}\" repeated; bodies merged", section.field))
                    .with_subject(id.as_str())
                    .at_line(section.line),
            );
        }
        let tier = match section.field {
            "Title" => {
                append_text(&mut story.title, &section.body);
                continue;
            }
            "Date" => {
                append_text(&mut story.date, &section.body);
                continue;
            }
            "Collection" => {
                append_text(&mut story.collection, &section.body);
                continue;
            }
            "Description" => {
                append_text(&mut story.description, &section.body);
                continue;
            }
            "Choice Themes" => Tier::Choice,
            "Major Themes" => Tier::Major,
            "Minor Themes" => Tier::Minor,
            other => {
                diagnostics.push(
                    Diagnostic::warning(Code::UnknownField, format!("unknown story field \"{other}\" ignored"))
                        .with_subject(id.as_str())
                        .at_line(section.line),
                );
                continue;
            }
        };
        for (offset, line) in section.body.iter().enumerate() {
            let at = section.line + 1 + offset;
            let Some(annotation) = parse_annotation(line, tier) else {
                diagnostics.push(
                    Diagnostic::error(Code::BadAnnotation, format!("annotation line \"{line}\" names no theme"))
                        .with_subject(id.as_str())
                        .at_line(at),
                );
                return None;
            };
            dup_lines.push(at);
            story.annotations.push(annotation);
        }
    }

    if !story.date.is_empty() && !is_valid_date(&story.date) {
        diagnostics.push(
            Diagnostic::warning(Code::BadDate, format!("date \"{}\" is not YYYY, YYYY-MM-DD or YYYY-YYYY", story.date))
                .with_subject(id.as_str())
                .at_line(block.line),
        );
    }

    let mut seen = BTreeSet::new();
    for (annotation, line) in story.annotations.iter().zip(&dup_lines) {
        if !seen.insert(&annotation.theme) {
            diagnostics.push(
                Diagnostic::warning(
                    Code::DupAnnotation,
                    format!("\"{}\" annotated more than once; first kept", annotation.theme),
                )
                .with_subject(id.as_str())
                .at_line(*line),
            );
        }
    }
    story.dedup_annotations();
    story.sort_annotations();
    Some(story)
}

/// `theme-name` optionally followed by ` [comment]`.
fn parse_annotation(line: &str, tier: Tier) -> Option<Annotation> {
    let open = if line.starts_with('[') { Some(0) } else { line.find(" [").map(|i| i + 1) };
    let (name, comment) = match (open, line.ends_with(']')) {
        (Some(open), true) => {
            let comment = line[open + 1..line.len() - 1].trim();
            (&line[..open], (!comment.is_empty()).then(|| comment.to_string()))
        }
        _ => (line, None),
    };
    let theme = ThemeName::parse_trimmed(name).ok()?;
    Some(Annotation { theme, tier, comment })
}

fn is_valid_date(date: &str) -> bool {
    let year = |s: &str| s.len() == 4 && s.bytes().all(|b| b.is_ascii_digit());
    let two = |s: &str, max: u32| s.len() == 2 && s.parse::<u32>().is_ok_and(|v| (1..=max).contains(&v));
    match date.split('-').collect::<Vec<_>>()[..] {
        [y] => year(y),
        [a, b] => year(a) && year(b) && a <= b,
        [y, m, d] => year(y) && two(m, 12) && two(d, 31),
        _ => false,
    }
}

fn append_text(field: &mut String, body: &[&str]) {
    if body.is_empty() {
        return;
    }
    if !field.is_empty() {
        field.push('\n');
    }
    field.push_str(&body.join("\n"));
}

/// Canonical form: stories by id; metadata, then Choice, Major and Minor
/// sections with themes sorted by name.
pub fn serialize_story_document(stories: &[StoryEntry]) -> String {
    let mut sorted: Vec<&StoryEntry> = stories.iter().collect();
    sorted.sort_by(|a, b| a.story_id.cmp(&b.story_id));
    let mut out = String::new();
    for story in sorted {
        let mut sections: Vec<(&str, Vec<String>)> = vec![
            ("Title", owned(text_lines(&story.title))),
            ("Date", owned(text_lines(&story.date))),
            ("Collection", owned(text_lines(&story.collection))),
            ("Description", owned(text_lines(&story.description))),
        ];
        for tier in Tier::ALL {
            let mut tagged: Vec<&Annotation> = story.annotations.iter().filter(|a| a.tier == tier).collect();
            tagged.sort_by(|a, b| a.theme.cmp(&b.theme));
            let lines = tagged
                .into_iter()
                .map(|a| match a.comment.as_deref().map(str::trim) {
                    Some(c) if !c.is_empty() => format!("{} [{c}]", a.theme),
                    _ => a.theme.to_string(),
                })
                .collect();
            sections.push((tier_field(tier), lines));
        }
        let borrowed: Vec<(&str, Vec<&str>)> = sections
            .iter()
            .map(|(f, lines)| (*f, lines.iter().map(String::as_str).collect()))
            .collect();
        write_block(&mut out, story.story_id.as_str(), &borrowed);
    }
    out
}

fn owned(lines: Vec<&str>) -> Vec<String> {
    lines.into_iter().map(String::from).collect()
}
