//! The block grammar shared by theme and story documents:
//!
//! ```text
//! block   := header-line, underline ("=" x >= 3), blank, section*
//! section := ":: " field-name, newline, body lines up to a blank line
//! ```
//!
//! This layer only checks shape. Field names and bodies are interpreted by the
//! theme and story parsers.

use lto_core::{Code, Diagnostic};

pub(crate) struct RawSection<'a> {
    pub field: &'a str,
    pub line: usize,
    pub body: Vec<&'a str>,
}

pub(crate) struct RawBlock<'a> {
    pub header: &'a str,
    pub line: usize,
    pub sections: Vec<RawSection<'a>>,
}

struct Lines<'a> {
    lines: Vec<&'a str>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines: Vec<&str> = text.split('\n').map(str::trim).collect();
        if text.ends_with('\n') {
            lines.pop();
        }
        Lines { lines }
    }

    fn len(&self) -> usize {
        self.lines.len()
    }

    fn get(&self, i: usize) -> Option<&'a str> {
        self.lines.get(i).copied()
    }

    fn blank(&self, i: usize) -> bool {
        self.get(i).is_none_or(str::is_empty)
    }

    fn underline(&self, i: usize) -> bool {
        self.get(i).is_some_and(|l| l.len() >= 3 && l.bytes().all(|b| b == b'='))
    }

    fn header_start(&self, i: usize) -> bool {
        !self.blank(i) && !self.get(i).unwrap().starts_with("::") && self.underline(i + 1)
    }

    /// Next index at or after `from` where a well-formed block begins.
    fn resync(&self, from: usize) -> usize {
        (from..self.len())
            .find(|&i| (i == 0 || self.blank(i - 1)) && self.header_start(i))
            .unwrap_or(self.len())
    }
}

/// Splits a document into blocks. A block with a shape error is dropped with
/// one error diagnostic and parsing resumes at the next block header. A stray
/// line after a finished section is reported but does not drop its block.
pub(crate) fn parse_blocks(text: &str) -> (Vec<RawBlock<'_>>, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();
    let text = match text.strip_prefix('\u{feff}') {
        Some(rest) => {
            diagnostics.push(Diagnostic::warning(Code::Bom, "byte-order mark ignored").at_line(1));
            rest
        }
        None => text,
    };
    let lines = Lines::new(text);
    let mut blocks = Vec::new();

    let mut i = 0;
    'blocks: while i < lines.len() {
        if lines.blank(i) {
            i += 1;
            continue;
        }
        let first = lines.get(i).unwrap();
        if first.starts_with("::") {
            diagnostics.push(
                Diagnostic::error(Code::OrphanSection, format!("section \"{first}\" outside of any block"))
                    .at_line(i + 1),
            );
            i = lines.resync(i + 1);
            continue;
        }
        if !lines.underline(i + 1) {
            let at = (i + 2).min(lines.len() + 1);
            diagnostics.push(
                Diagnostic::error(
                    Code::MissingUnderline,
                    format!("header \"{first}\" must be followed by a line of at least three '='"),
                )
                .with_subject(first)
                .at_line(at),
            );
            i = lines.resync(i + 1);
            continue;
        }

        let mut block = RawBlock { header: first, line: i + 1, sections: Vec::new() };
        let mut j = i + 2;
        if !lines.blank(j) {
            diagnostics.push(
                Diagnostic::error(Code::ExpectedBlank, "a blank line must follow the underline")
                    .with_subject(first)
                    .at_line(j + 1),
            );
            i = lines.resync(j);
            continue;
        }

        loop {
            while j < lines.len() && lines.blank(j) {
                j += 1;
            }
            if j >= lines.len() || lines.header_start(j) {
                break;
            }
            let line = lines.get(j).unwrap();
            let field = match line.strip_prefix("::") {
                Some(rest) if rest.starts_with(char::is_whitespace) && !rest.trim().is_empty() => rest.trim(),
                Some(_) => {
                    diagnostics.push(
                        Diagnostic::error(Code::BadSection, format!("malformed section header \"{line}\""))
                            .with_subject(first)
                            .at_line(j + 1),
                    );
                    i = lines.resync(j + 1);
                    continue 'blocks;
                }
                // A stray line after a blank ends the block; the block itself
                // is complete, so it is kept.
                None => {
                    diagnostics.push(
                        Diagnostic::error(Code::UnexpectedLine, format!("expected a \":: Field\" line, found \"{line}\""))
                            .at_line(j + 1),
                    );
                    blocks.push(block);
                    i = lines.resync(j + 1);
                    continue 'blocks;
                }
            };
            let mut section = RawSection { field, line: j + 1, body: Vec::new() };
            j += 1;
            while !lines.blank(j) {
                let body = lines.get(j).unwrap();
                if body.starts_with("::") {
                    diagnostics.push(
                        Diagnostic::error(Code::ExpectedBlank, "a blank line must precede a section header")
                            .with_subject(first)
                            .at_line(j + 1),
                    );
                    i = lines.resync(j + 1);
                    continue 'blocks;
                }
                section.body.push(body);
                j += 1;
            }
            block.sections.push(section);
        }
        blocks.push(block);
        i = j;
    }
    (blocks, diagnostics)
}

/// Renders one block. Sections with empty bodies are omitted.
pub(crate) fn write_block(out: &mut String, header: &str, sections: &[(&str, Vec<&str>)]) {
    if !out.is_empty() {
        out.push_str("\n\n");
    }
    out.push_str(header);
    out.push('\n');
    out.push_str(&"=".repeat(header.chars().count().max(3)));
    out.push('\n');
    for (field, body) in sections {
        if body.is_empty() {
            continue;
        }
        out.push_str("\n:: ");
        out.push_str(field);
        out.push('\n');
        for line in body {
            out.push_str(line);
            out.push('\n');
        }
    }
}

/// Body lines of a free-text field in canonical form.
pub(crate) fn text_lines(text: &str) -> Vec<&str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).collect()
}
