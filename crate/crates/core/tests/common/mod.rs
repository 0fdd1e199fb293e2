#![allow(dead_code)]

use std::fs;

use sleuth_core::kg::{parse_turtle, Graph, Term};
use sleuth_core::rules::{parse_rules, Rule};

pub const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

pub fn fixture_text(name: &str) -> String {
    fs::read_to_string(format!("{FIXTURES}/{name}")).unwrap()
}

pub fn story() -> Graph {
    parse_turtle(&fixture_text("speckled_band.ttl")).unwrap()
}

pub fn mom_rules(g: &Graph) -> Vec<Rule> {
    parse_rules(&fixture_text("mom.rules"), g.prefixes()).unwrap()
}

/// A term in the story namespace.
pub fn sb(local: &str) -> Term {
    Term::iri(format!("http://example.org/sleuth/speckled-band/{local}")).unwrap()
}

pub fn mom(local: &str) -> Term {
    Term::iri(format!("http://example.org/sleuth/mom#{local}")).unwrap()
}
