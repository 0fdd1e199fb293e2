//! Rule files:
//!
//! ```text
//! @prefix mom: <http://example.org/sleuth/mom#> .
//! rule name: (h_s h_p h_o) [, (h2 ...)] :- (p1 ...), (p2 ...), not (n1 ...) .
//! ```
//!
//! A block with several heads becomes one rule per head, named `name`,
//! `name#1`, `name#2`, ... A head position may be a Skolem term
//! `[t1 t2 ...]`.

use std::collections::BTreeMap;

use crate::kg::{Cursor, Name, ParseError};
use crate::query::{read_pattern_term, read_triple_pattern, TriplePattern};

use super::rule::{Head, HeadTerm, Rule};

pub fn parse_rules(text: &str, prefixes: &BTreeMap<String, String>) -> Result<Vec<Rule>, ParseError> {
    let mut prefixes = prefixes.clone();
    let mut cur = Cursor::new(text);
    let mut rules = Vec::new();
    loop {
        cur.skip_trivia();
        if cur.at_end() {
            return Ok(rules);
        }
        if cur.eat_str("@prefix") {
            cur.skip_trivia();
            let prefix = match cur.read_name()? {
                Name::Prefixed { prefix, local } if local.is_empty() => prefix,
                _ => return Err(cur.syntax("expected a prefix label ending in ':'")),
            };
            cur.skip_trivia();
            let ns = cur.read_iri_ref()?;
            cur.skip_trivia();
            cur.expect('.')?;
            prefixes.insert(prefix, ns.as_str().to_string());
            continue;
        }
        rules.extend(read_rule(&mut cur, &prefixes)?);
    }
}

fn read_rule(cur: &mut Cursor<'_>, prefixes: &BTreeMap<String, String>) -> Result<Vec<Rule>, ParseError> {
    let keyword = cur.read_word();
    if keyword != "rule" {
        return Err(cur.syntax(format!("expected 'rule' or '@prefix', found {:?}", keyword)));
    }
    cur.skip_trivia();
    let name = cur.read_word();
    if name.is_empty() {
        return Err(cur.syntax("expected a rule name"));
    }
    cur.skip_trivia();
    cur.expect(':')?;

    let mut heads = Vec::new();
    loop {
        cur.skip_trivia();
        heads.push(read_head(cur, prefixes)?);
        cur.skip_trivia();
        if !cur.eat(',') {
            break;
        }
    }
    cur.skip_trivia();
    if !cur.eat_str(":-") {
        return Err(cur.syntax(format!("expected ':-', found {}", cur.describe_next())));
    }

    let mut body = Vec::new();
    let mut negated = Vec::new();
    cur.skip_trivia();
    if !cur.eat('.') {
        loop {
            cur.skip_trivia();
            let negative = cur.rest().starts_with("not") && {
                let mut probe = cur.clone();
                probe.read_word() == "not"
            };
            if negative {
                cur.read_word();
                cur.skip_trivia();
            }
            let pattern = read_body_pattern(cur, prefixes)?;
            if negative {
                negated.push(pattern);
            } else {
                body.push(pattern);
            }
            cur.skip_trivia();
            if cur.eat(',') {
                continue;
            }
            cur.expect('.')?;
            break;
        }
    }

    let count = heads.len();
    Ok(heads
        .into_iter()
        .enumerate()
        .map(|(i, head)| Rule {
            name: if i == 0 || count == 1 {
                name.clone()
            } else {
                format!("{name}#{i}")
            },
            head,
            body: body.clone(),
            negated: negated.clone(),
        })
        .collect())
}

fn read_body_pattern(cur: &mut Cursor<'_>, prefixes: &BTreeMap<String, String>) -> Result<TriplePattern, ParseError> {
    cur.expect('(')?;
    cur.skip_trivia();
    let p = read_triple_pattern(cur, prefixes, true)?;
    cur.skip_trivia();
    cur.expect(')')?;
    Ok(p)
}

fn read_head_term(
    cur: &mut Cursor<'_>,
    prefixes: &BTreeMap<String, String>,
    allow_a: bool,
) -> Result<HeadTerm, ParseError> {
    if !cur.eat('[') {
        return read_pattern_term(cur, prefixes, allow_a).map(HeadTerm::Pattern);
    }
    let mut args = Vec::new();
    loop {
        cur.skip_trivia();
        if cur.eat(']') {
            break;
        }
        args.push(read_pattern_term(cur, prefixes, false)?);
    }
    if args.is_empty() {
        return Err(cur.syntax("empty Skolem term"));
    }
    Ok(HeadTerm::Skolem(args))
}

fn read_head(cur: &mut Cursor<'_>, prefixes: &BTreeMap<String, String>) -> Result<Head, ParseError> {
    cur.expect('(')?;
    cur.skip_trivia();
    let s = read_head_term(cur, prefixes, false)?;
    cur.skip_trivia();
    let p = read_head_term(cur, prefixes, true)?;
    cur.skip_trivia();
    let o = read_head_term(cur, prefixes, false)?;
    cur.skip_trivia();
    cur.expect(')')?;
    Ok(Head {
        subject: s,
        predicate: p,
        object: o,
    })
}
