//! Theme documents.

use std::collections::BTreeSet;

use lto_core::{Code, Diagnostic, Theme, ThemeName};

use super::block::{parse_blocks, text_lines, write_block, RawBlock};

/// Section names in canonical order.
pub const THEME_FIELDS: [&str; 6] = ["Description", "Parents", "Aliases", "References", "Examples", "Notes"];

/// Themes parsed from one document, with the 1-based line of each header.
#[derive(Debug, Clone, Default)]
pub struct ParsedThemes {
    pub themes: Vec<Theme>,
    pub lines: Vec<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn parse_theme_document(text: &str) -> (Vec<Theme>, Vec<Diagnostic>) {
    let parsed = parse_themes_located(text);
    (parsed.themes, parsed.diagnostics)
}

/// Parses every well-formed block. Blocks with errors are skipped; unknown
/// fields are kept in `notes` with a warning.
pub fn parse_themes_located(text: &str) -> ParsedThemes {
    let (blocks, mut diagnostics) = parse_blocks(text);
    let mut parsed = ParsedThemes::default();
    for block in blocks {
        if let Some(theme) = theme_from_block(&block, &mut diagnostics) {
            parsed.themes.push(theme);
            parsed.lines.push(block.line);
        }
    }
    parsed.diagnostics = diagnostics;
    parsed
}

fn theme_from_block(block: &RawBlock<'_>, diagnostics: &mut Vec<Diagnostic>) -> Option<Theme> {
    let name = match ThemeName::new(block.header) {
        Ok(name) => name,
        Err(e) => {
            diagnostics.push(
                Diagnostic::error(Code::InvalidName, format!("bad theme name \"{}\": {e}", block.header))
                    .at_line(block.line),
            );
            return None;
        }
    };
    let mut theme = Theme::new(name.clone());
    let mut notes: Vec<String> = Vec::new();
    let mut seen_fields = BTreeSet::new();

    for section in &block.sections {
        if !seen_fields.insert(section.field) {
            diagnostics.push(
                Diagnostic::warning(Code::DupSection, format!("section \"{}\" repeated; bodies merged", section.field))
                    .with_subject(name.as_str())
                    .at_line(section.line),
            );
        }
        let body = &section.body;
        match section.field {
            "Description" => append_text(&mut theme.definition, body),
            "Examples" => append_text(&mut theme.examples, body),
            "Notes" => notes.push(body.join("\n")),
            "References" => theme.references.extend(body.iter().map(|l| l.to_string())),
            "Parents" | "Aliases" => {
                let is_parents = section.field == "Parents";
                for (offset, line) in body.iter().enumerate() {
                    let at = section.line + 1 + offset;
                    let entry = match ThemeName::new(line) {
                        Ok(entry) => entry,
                        Err(e) => {
                            diagnostics.push(
                                Diagnostic::error(Code::InvalidName, format!("bad theme name \"{line}\": {e}"))
                                    .with_subject(name.as_str())
                                    .at_line(at),
                            );
                            return None;
                        }
                    };
                    let list = if is_parents { &mut theme.parents } else { &mut theme.aliases };
                    if list.contains(&entry) {
                        diagnostics.push(
                            Diagnostic::warning(Code::DupEntry, format!("\"{entry}\" listed twice; kept once"))
                                .with_subject(name.as_str())
                                .at_line(at),
                        );
                    } else {
                        list.push(entry);
                    }
                }
            }
            other => {
                diagnostics.push(
                    Diagnostic::warning(Code::UnknownField, format!("unknown field \"{other}\" kept in Notes"))
                        .with_subject(name.as_str())
                        .at_line(section.line),
                );
                if !body.is_empty() {
                    notes.push(format!("{other}: {}", body.join("\n")));
                }
            }
        }
    }
    theme.notes = notes.into_iter().filter(|n| !n.is_empty()).collect::<Vec<_>>().join("\n");
    Some(theme)
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

/// Canonical form: themes sorted by name, fields in [`THEME_FIELDS`] order,
/// empty fields omitted, one blank line between sections and two between
/// blocks.
pub fn serialize_theme_document(themes: &[Theme]) -> String {
    let mut sorted: Vec<&Theme> = themes.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let mut out = String::new();
    for theme in sorted {
        let sections = [
            ("Description", text_lines(&theme.definition)),
            ("Parents", name_lines(&theme.parents)),
            ("Aliases", name_lines(&theme.aliases)),
            (
                "References",
                theme.references.iter().map(|r| r.trim()).filter(|r| !r.is_empty()).collect(),
            ),
            ("Examples", text_lines(&theme.examples)),
            ("Notes", text_lines(&theme.notes)),
        ];
        write_block(&mut out, &theme.name, &sections);
    }
    out
}

fn name_lines(list: &[ThemeName]) -> Vec<&str> {
    list.iter().map(ThemeName::as_str).collect()
}
