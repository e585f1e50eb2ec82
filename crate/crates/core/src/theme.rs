use alloc::string::String;
use alloc::vec::Vec;

use crate::ThemeName;

/// One theme class as curated: a name, its definition, and its is-a parents.
///
/// `references`, `examples` and `notes` are free text carried through the
/// text format and the OWL export but not interpreted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Theme {
    pub name: ThemeName,
    pub definition: String,
    pub parents: Vec<ThemeName>,
    pub aliases: Vec<ThemeName>,
    pub references: Vec<String>,
    pub examples: String,
    pub notes: String,
}

impl Theme {
    pub fn new(name: ThemeName) -> Self {
        Theme {
            name,
            definition: String::new(),
            parents: Vec::new(),
            aliases: Vec::new(),
            references: Vec::new(),
            examples: String::new(),
            notes: String::new(),
        }
    }

    pub fn with_definition(mut self, definition: impl Into<String>) -> Self {
        self.definition = definition.into();
        self
    }

    pub fn with_parent(mut self, parent: ThemeName) -> Self {
        self.parents.push(parent);
        self
    }

    pub fn with_alias(mut self, alias: ThemeName) -> Self {
        self.aliases.push(alias);
        self
    }

    pub fn with_reference(mut self, reference: impl Into<String>) -> Self {
        self.references.push(reference.into());
        self
    }

    pub fn is_root_candidate(&self) -> bool {
        self.parents.is_empty()
    }
}
