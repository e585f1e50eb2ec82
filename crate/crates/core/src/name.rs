use alloc::string::String;
use core::borrow::Borrow;
use core::fmt;
use core::ops::Deref;

use unicode_normalization::UnicodeNormalization;

/// The name of a theme class (or of one of its aliases).
///
/// Names are stored NFC-normalized and compared case-sensitively. A name is
/// never empty, never spans lines, and has no surrounding whitespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThemeName(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NameError {
    #[error("theme name is empty")]
    Empty,
    #[error("theme name contains a line break")]
    LineBreak,
    #[error("theme name has leading or trailing whitespace")]
    Whitespace,
}

impl ThemeName {
    /// Validates and NFC-normalizes `raw`. Surrounding whitespace is rejected,
    /// not trimmed; use [`ThemeName::parse_trimmed`] for lenient input.
    pub fn new(raw: &str) -> Result<Self, NameError> {
        if raw.trim().is_empty() {
            return Err(NameError::Empty);
        }
        if raw.contains(['\n', '\r', '\u{2028}', '\u{2029}', '\u{85}']) {
            return Err(NameError::LineBreak);
        }
        if raw.trim() != raw {
            return Err(NameError::Whitespace);
        }
        Ok(ThemeName(raw.nfc().collect()))
    }

    pub fn parse_trimmed(raw: &str) -> Result<Self, NameError> {
        Self::new(raw.trim())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl Deref for ThemeName {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for ThemeName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for ThemeName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ThemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ThemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl TryFrom<&str> for ThemeName {
    type Error = NameError;
    fn try_from(value: &str) -> Result<Self, Self::Error> {
        ThemeName::new(value)
    }
}

/// Normalizes arbitrary user input for lookup against stored names.
pub(crate) fn normalize_lookup(raw: &str) -> String {
    raw.trim().nfc().collect()
}
