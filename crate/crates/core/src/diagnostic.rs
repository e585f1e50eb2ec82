//! Located messages shared by the validator and the text-format parsers.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

/// Stable diagnostic identifiers. The string form (`as_str`) is part of the
/// output contract and is what reports are sorted by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    // structural
    Cycle,
    DanglingParent,
    DupName,
    MultiRoot,
    AliasClash,
    DupEntry,
    InvalidName,
    // lint
    NoDefinition,
    NoReference,
    SuffixConvention,
    // document grammar
    Bom,
    MissingUnderline,
    ExpectedBlank,
    BadSection,
    OrphanSection,
    UnexpectedLine,
    UnknownField,
    DupSection,
    // stories and corpus
    BadStoryId,
    BadAnnotation,
    BadDate,
    DupAnnotation,
    DupStory,
    UnknownTheme,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Cycle => "CYCLE",
            Code::DanglingParent => "DANGLING_PARENT",
            Code::DupName => "DUP_NAME",
            Code::MultiRoot => "MULTI_ROOT",
            Code::AliasClash => "ALIAS_CLASH",
            Code::DupEntry => "DUP_ENTRY",
            Code::InvalidName => "INVALID_NAME",
            Code::NoDefinition => "NO_DEFINITION",
            Code::NoReference => "NO_REFERENCE",
            Code::SuffixConvention => "SUFFIX_CONVENTION",
            Code::Bom => "BOM",
            Code::MissingUnderline => "MISSING_UNDERLINE",
            Code::ExpectedBlank => "EXPECTED_BLANK",
            Code::BadSection => "BAD_SECTION",
            Code::OrphanSection => "ORPHAN_SECTION",
            Code::UnexpectedLine => "UNEXPECTED_LINE",
            Code::UnknownField => "UNKNOWN_FIELD",
            Code::DupSection => "DUP_SECTION",
            Code::BadStoryId => "BAD_STORY_ID",
            Code::BadAnnotation => "BAD_ANNOTATION",
            Code::BadDate => "BAD_DATE",
            Code::DupAnnotation => "DUP_ANNOTATION",
            Code::DupStory => "DUP_STORY",
            Code::UnknownTheme => "UNKNOWN_THEME",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    /// Theme name or story id the message is about, when there is one.
    pub subject: Option<String>,
    pub file: Option<String>,
    /// 1-based.
    pub line: Option<usize>,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, code, message)
    }

    pub fn warning(code: Code, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, code, message)
    }

    fn new(severity: Severity, code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            severity,
            code,
            message: message.into(),
            subject: None,
            file: None,
            line: None,
        }
    }

    pub fn with_subject(mut self, subject: impl Into<String>) -> Self {
        self.subject = Some(subject.into());
        self
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }

    pub fn in_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Report order: code, subject, file, line, then the rest for a total order.
    pub fn report_cmp(&self, other: &Self) -> Ordering {
        self.code
            .as_str()
            .cmp(other.code.as_str())
            .then_with(|| self.subject.cmp(&other.subject))
            .then_with(|| self.file.cmp(&other.file))
            .then_with(|| self.line.cmp(&other.line))
            .then_with(|| self.severity.cmp(&other.severity))
            .then_with(|| self.message.cmp(&other.message))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.file, self.line) {
            (Some(file), Some(line)) => write!(f, "{file}:{line}: ")?,
            (Some(file), None) => write!(f, "{file}: ")?,
            (None, Some(line)) => write!(f, "line {line}: ")?,
            (None, None) => {}
        }
        write!(f, "{}[{}]: {}", self.severity.as_str(), self.code, self.message)
    }
}
