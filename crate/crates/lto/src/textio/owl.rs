//! OWL 2 functional-style export.

use std::fmt::Write;

use lto_core::ThemeOntology;

pub const IRI_BASE: &str = "https://themeontology.org/lto#";
pub const ONTOLOGY_IRI: &str = "https://themeontology.org/lto";

/// BFO "generically dependent continuant", the anchor for the root class.
pub const BFO_ANCHOR: &str = "obo:BFO_0000031";
const DEFINITION: &str = "obo:IAO_0000115";

const PREAMBLE: &str = "\
Prefix(:=<https://themeontology.org/lto#>)
Prefix(obo:=<http://purl.obolibrary.org/obo/>)
Prefix(owl:=<http://www.w3.org/2002/07/owl#>)
Prefix(rdf:=<http://www.w3.org/1999/02/22-rdf-syntax-ns#>)
Prefix(rdfs:=<http://www.w3.org/2000/01/rdf-schema#>)
Prefix(skos:=<http://www.w3.org/2004/02/skos/core#>)
Prefix(xsd:=<http://www.w3.org/2001/XMLSchema#>)

Ontology(<https://themeontology.org/lto>

Declaration(AnnotationProperty(obo:IAO_0000115))
AnnotationAssertion(rdfs:label obo:IAO_0000115 \"definition\")
Declaration(AnnotationProperty(skos:altLabel))

Declaration(Class(obo:BFO_0000031))
AnnotationAssertion(rdfs:label obo:BFO_0000031 \"generically dependent continuant\")
";

/// IRI fragment for a theme name: spaces become `-`; a literal `-`, `%` and
/// every other ASCII character outside `[A-Za-z0-9._~]` is percent-encoded,
/// which keeps the mapping injective. Non-ASCII letters and digits pass
/// through as IRI characters.
pub fn iri_fragment(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        match c {
            ' ' => out.push('-'),
            'A'..='Z' | 'a'..='z' | '0'..='9' | '.' | '_' | '~' => out.push(c),
            c if !c.is_ascii() && c.is_alphanumeric() => out.push(c),
            c => {
                let mut buf = [0u8; 4];
                for byte in c.encode_utf8(&mut buf).bytes() {
                    write!(out, "%{byte:02X}").unwrap();
                }
            }
        }
    }
    out
}

pub fn class_iri(name: &str) -> String {
    format!("<{IRI_BASE}{}>", iri_fragment(name))
}

fn literal(text: &str) -> String {
    let flat = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(" ");
    format!("\"{}\"", flat.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders the ontology. One class per theme (label, definition, aliases as
/// `skos:altLabel`, references as `rdfs:seeAlso`), one `SubClassOf` per parent
/// edge, and the root placed under the BFO anchor. Classes and their parents
/// are ordered by IRI.
pub fn export_owl(ontology: &ThemeOntology) -> String {
    let mut out = String::from(PREAMBLE);
    writeln!(out, "SubClassOf({} {BFO_ANCHOR})", class_iri(ontology.root())).unwrap();

    let mut classes: Vec<(String, _)> = ontology.themes().map(|t| (class_iri(&t.name), t)).collect();
    classes.sort_by(|a, b| a.0.cmp(&b.0));
    for (iri, theme) in classes {
        out.push('\n');
        writeln!(out, "Declaration(Class({iri}))").unwrap();
        writeln!(out, "AnnotationAssertion(rdfs:label {iri} {})", literal(&theme.name)).unwrap();
        if !theme.definition.trim().is_empty() {
            writeln!(out, "AnnotationAssertion({DEFINITION} {iri} {})", literal(&theme.definition)).unwrap();
        }
        for alias in &theme.aliases {
            writeln!(out, "AnnotationAssertion(skos:altLabel {iri} {})", literal(alias)).unwrap();
        }
        for reference in &theme.references {
            writeln!(out, "AnnotationAssertion(rdfs:seeAlso {iri} {})", literal(reference)).unwrap();
        }
        let mut parents: Vec<String> = theme.parents.iter().map(|p| class_iri(p)).collect();
        parents.sort();
        for parent in parents {
            writeln!(out, "SubClassOf({iri} {parent})").unwrap();
        }
    }
    out.push_str(")\n");
    out
}
