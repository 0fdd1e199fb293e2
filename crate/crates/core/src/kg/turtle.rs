//! Turtle subset: `@prefix`, `;`/`,` continuations, `a`, IRIs, prefixed
//! names, quoted literals with `@lang`/`^^dt`, labeled blank nodes and `#`
//! comments. Blank-node property lists and collections are not supported.

use std::collections::BTreeMap;

use super::graph::{Graph, Triple};
use super::lexer::{Cursor, Name, ParseError, ParseErrorKind};
use super::term::{escape_string, Term};
use super::vocab;

pub fn parse_turtle(text: &str) -> Result<Graph, ParseError> {
    let mut graph = Graph::new();
    let mut prefixes: BTreeMap<String, String> = BTreeMap::new();
    let mut cur = Cursor::new(text);
    loop {
        cur.skip_trivia();
        if cur.at_end() {
            break;
        }
        if cur.peek() == Some('@') {
            cur.bump();
            let word = cur.read_word();
            if word != "prefix" {
                return Err(cur.syntax(format!("unsupported directive @{word}")));
            }
            let (prefix, ns) = read_prefix_decl(&mut cur)?;
            cur.skip_trivia();
            cur.expect('.')?;
            prefixes.insert(prefix.clone(), ns.clone());
            graph.set_prefix(prefix, ns);
            continue;
        }
        if cur.rest().len() >= 6 && cur.rest()[..6].eq_ignore_ascii_case("prefix") {
            let mut probe = cur.clone();
            probe.read_word();
            if probe.peek().is_some_and(char::is_whitespace) {
                cur = probe;
                let (prefix, ns) = read_prefix_decl(&mut cur)?;
                prefixes.insert(prefix.clone(), ns.clone());
                graph.set_prefix(prefix, ns);
                continue;
            }
        }
        read_statement(&mut cur, &prefixes, &mut graph)?;
    }
    Ok(graph)
}

fn read_prefix_decl(cur: &mut Cursor<'_>) -> Result<(String, String), ParseError> {
    cur.skip_trivia();
    let prefix = match cur.read_name()? {
        Name::Prefixed { prefix, local } if local.is_empty() => prefix,
        _ => return Err(cur.syntax("expected a prefix label ending in ':'")),
    };
    cur.skip_trivia();
    let ns = cur.read_iri_ref()?;
    Ok((prefix, ns.as_str().to_string()))
}

fn read_statement(
    cur: &mut Cursor<'_>,
    prefixes: &BTreeMap<String, String>,
    graph: &mut Graph,
) -> Result<(), ParseError> {
    let subject = cur.read_term(prefixes, false)?;
    if subject.is_literal() {
        return Err(cur.syntax("a literal cannot be a subject"));
    }
    loop {
        cur.skip_trivia();
        let predicate = cur.read_term(prefixes, true)?;
        if predicate.as_iri().is_none() {
            return Err(cur.syntax("predicate must be an IRI"));
        }
        loop {
            cur.skip_trivia();
            let object = cur.read_term(prefixes, false)?;
            graph.insert(Triple {
                subject: subject.clone(),
                predicate: predicate.clone(),
                object,
            });
            cur.skip_trivia();
            if !cur.eat(',') {
                break;
            }
        }
        if cur.eat(';') {
            // `;` may repeat and may directly precede the final `.`
            loop {
                cur.skip_trivia();
                if !cur.eat(';') {
                    break;
                }
            }
            if cur.peek() == Some('.') {
                break;
            }
            continue;
        }
        break;
    }
    cur.skip_trivia();
    if cur.eat('.') {
        Ok(())
    } else {
        Err(cur.error(ParseErrorKind::Syntax(format!(
            "expected '.', ';' or ',' after object, found {}",
            cur.describe_next()
        ))))
    }
}

fn write_term(graph: &Graph, term: &Term, out: &mut String) {
    match term {
        Term::Iri(iri) => out.push_str(&graph.compact_iri(iri)),
        Term::Blank(label) => {
            out.push_str("_:");
            out.push_str(label);
        }
        Term::Literal(lit) => {
            out.push('"');
            escape_string(lit.lexical(), out);
            out.push('"');
            if let Some(lang) = lit.language() {
                out.push('@');
                out.push_str(lang);
            } else if let Some(dt) = lit.datatype() {
                out.push_str("^^");
                out.push_str(&graph.compact_iri(dt));
            }
        }
    }
}

/// Writes prefix declarations then triples grouped by subject and
/// predicate, in (S, P, O) order.
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, ns) in graph.prefixes() {
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }
    let rdf_type = vocab::rdf_type();
    let mut prev: Option<&Triple> = None;
    for t in graph.iter() {
        match prev {
            Some(p) if p.subject == t.subject && p.predicate == t.predicate => {
                out.push_str(" ,\n        ");
            }
            Some(p) if p.subject == t.subject => {
                out.push_str(" ;\n    ");
                write_predicate(graph, &t.predicate, &rdf_type, &mut out);
                out.push(' ');
            }
            _ => {
                if prev.is_some() {
                    out.push_str(" .\n");
                }
                out.push('\n');
                write_term(graph, &t.subject, &mut out);
                out.push(' ');
                write_predicate(graph, &t.predicate, &rdf_type, &mut out);
                out.push(' ');
            }
        }
        write_term(graph, &t.object, &mut out);
        prev = Some(t);
    }
    if prev.is_some() {
        out.push_str(" .\n");
    }
    out
}

fn write_predicate(graph: &Graph, p: &Term, rdf_type: &Term, out: &mut String) {
    if p == rdf_type {
        out.push('a');
    } else {
        write_term(graph, p, out);
    }
}
