use alloc::string::String;

/// Errors returned by queries and statistics.
///
/// Structural problems found while building an ontology are not errors of this
/// type; they are reported as [`crate::Diagnostic`]s in a
/// [`crate::ValidationReport`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown theme: {0}")]
    UnknownTheme(String),
    #[error("unknown story: {0}")]
    UnknownStory(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("query set is empty")]
    EmptyQuery,
    #[error("background set is empty")]
    EmptyBackground,
    #[error("query story {0} is not in the background set")]
    QueryNotInBackground(String),
    #[error("story {0} appears in both groups")]
    GroupOverlap(String),
    #[error("comparison group is empty")]
    EmptyGroup,
}

impl Error {
    /// Stable identifier for diagnostics and machine-readable output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownTheme(_) => "UNKNOWN_THEME",
            Error::UnknownStory(_) => "UNKNOWN_STORY",
            Error::Domain(_) => "DOMAIN",
            Error::EmptyQuery => "EMPTY_QUERY",
            Error::EmptyBackground => "EMPTY_BACKGROUND",
            Error::QueryNotInBackground(_) => "QUERY_NOT_IN_BACKGROUND",
            Error::GroupOverlap(_) => "GROUP_OVERLAP",
            Error::EmptyGroup => "EMPTY_GROUP",
        }
    }
}
