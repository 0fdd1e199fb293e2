//! Namespaces and the closed scene property set.

use super::term::{Iri, Term};

pub const KGC: &str = "http://kgc.knowledge-graph.jp/ontology/kgc.owl#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub fn iri(ns: &str, local: &str) -> Iri {
    Iri::new(format!("{ns}{local}")).expect("vocabulary IRIs are well formed")
}

pub fn kgc(local: &str) -> Term {
    Term::Iri(iri(KGC, local))
}

pub fn rdf_type_iri() -> Iri {
    iri(RDF, "type")
}

pub fn rdf_type() -> Term {
    Term::Iri(rdf_type_iri())
}

pub fn rdfs_label() -> Term {
    Term::Iri(iri(RDFS, "label"))
}

pub fn xsd_datetime() -> Iri {
    iri(XSD, "dateTime")
}

/// The scene properties a [`Scene`](super::Scene) view understands.
pub const SCENE_PROPERTIES: [&str; 19] = [
    "subject",
    "hasPredicate",
    "hasProperty",
    "whom",
    "what",
    "where",
    "how",
    "why",
    "when",
    "then",
    "after",
    "if",
    "because",
    "time",
    "source",
    "infoSource",
    "orTarget",
    "Not",
    "canNot",
];

/// Prefixes every fresh graph starts with.
pub fn default_prefixes() -> Vec<(&'static str, &'static str)> {
    vec![("kgc", KGC), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD)]
}
