//! Character-level scanner shared by the Turtle, pattern and rule parsers.

use std::collections::BTreeMap;

use thiserror::Error;

use super::term::{valid_blank_label, Iri, Literal, Term, TermError};
use super::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("malformed IRI: {0}")]
    MalformedIri(String),
    #[error("malformed literal: {0}")]
    MalformedLiteral(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// A prefixed name split at its first colon, or a bare word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Name {
    Prefixed { prefix: String, local: String },
    Bare(String),
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

/// Whether `local` can be written as the local part of a prefixed name.
pub(crate) fn valid_local(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let first = local.chars().next().unwrap();
    (first.is_alphanumeric() || first == '_') && !local.ends_with('.') && local.chars().all(is_name_char)
}

#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor {
            src,
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    pub fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub fn peek_nth(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind,
        }
    }

    pub fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.error(ParseErrorKind::Syntax(msg.into()))
    }

    /// Skips whitespace and `#` comments.
    pub fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Skips spaces, tabs and comments but stops at a newline.
    pub fn skip_inline_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' || c == '\r' {
                self.bump();
            } else if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            for _ in s.chars() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected {c:?}, found {}", self.describe_next())))
        }
    }

    pub fn describe_next(&self) -> String {
        match self.peek() {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        }
    }

    /// Reads `[A-Za-z0-9_.-]*` (unicode letters allowed), giving back any trailing dots.
    pub fn read_word(&mut self) -> String {
        let start = self.pos;
        let mut end = self.pos;
        let mut probe = self.clone();
        while let Some(c) = probe.peek() {
            if !is_name_char(c) {
                break;
            }
            probe.bump();
            if c != '.' {
                end = probe.pos;
            }
        }
        while self.pos < end {
            self.bump();
        }
        self.src[start..end].to_string()
    }

    /// Reads a prefixed name (`pfx:local`, `:local`) or a bare word.
    pub fn read_name(&mut self) -> Result<Name, ParseError> {
        let head = if self.peek() == Some(':') {
            String::new()
        } else {
            self.read_word()
        };
        if self.peek() == Some(':') {
            self.bump();
            let local = self.read_word();
            if !valid_local(&local) {
                return Err(self.syntax(format!("invalid local name {local:?}")));
            }
            Ok(Name::Prefixed { prefix: head, local })
        } else if head.is_empty() {
            Err(self.syntax(format!("expected a name, found {}", self.describe_next())))
        } else {
            Ok(Name::Bare(head))
        }
    }

    /// Reads `<...>` including the angle brackets.
    pub fn read_iri_ref(&mut self) -> Result<Iri, ParseError> {
        let (line, column) = (self.line, self.column);
        self.expect('<')?;
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() => {
                    return Err(ParseError {
                        line,
                        column,
                        kind: ParseErrorKind::MalformedIri("whitespace inside IRI".into()),
                    })
                }
                Some(c) => value.push(c),
                None => {
                    return Err(ParseError {
                        line,
                        column,
                        kind: ParseErrorKind::MalformedIri("unterminated IRI".into()),
                    })
                }
            }
        }
        Iri::new(value).map_err(|e| ParseError {
            line,
            column,
            kind: ParseErrorKind::MalformedIri(e.to_string()),
        })
    }

    fn read_string(&mut self) -> Result<String, ParseError> {
        let (line, column) = (self.line, self.column);
        let malformed = |msg: &str| ParseError {
            line,
            column,
            kind: ParseErrorKind::MalformedLiteral(msg.to_string()),
        };
        self.expect('"')?;
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(value),
                Some('\\') => match self.bump() {
                    Some('n') => value.push('\n'),
                    Some('r') => value.push('\r'),
                    Some('t') => value.push('\t'),
                    Some('"') => value.push('"'),
                    Some('\'') => value.push('\''),
                    Some('\\') => value.push('\\'),
                    Some(u @ ('u' | 'U')) => {
                        let width = if u == 'u' { 4 } else { 8 };
                        let mut hex = String::new();
                        for _ in 0..width {
                            hex.push(self.bump().ok_or_else(|| malformed("truncated escape"))?);
                        }
                        let ch = u32::from_str_radix(&hex, 16)
                            .ok()
                            .and_then(char::from_u32)
                            .ok_or_else(|| malformed("invalid unicode escape"))?;
                        value.push(ch);
                    }
                    _ => return Err(malformed("invalid escape sequence")),
                },
                Some('\n') | None => return Err(malformed("unterminated string")),
                Some(c) => value.push(c),
            }
        }
    }

    /// Reads a quoted literal with an optional `@lang` or `^^datatype` suffix.
    pub fn read_literal(&mut self, prefixes: &BTreeMap<String, String>) -> Result<Literal, ParseError> {
        let (line, column) = (self.line, self.column);
        let lexical = self.read_string()?;
        let mut language = None;
        let mut datatype = None;
        if self.eat('@') {
            let mut tag = String::new();
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || c == '-' {
                    tag.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            language = Some(tag);
        }
        if self.eat_str("^^") {
            datatype = Some(if self.peek() == Some('<') {
                self.read_iri_ref()?
            } else {
                match self.read_name()? {
                    Name::Prefixed { prefix, local } => self.resolve(prefixes, &prefix, &local)?,
                    Name::Bare(w) => return Err(self.syntax(format!("expected datatype, found {w:?}"))),
                }
            });
        }
        Literal::from_parts(lexical, language.as_deref(), datatype).map_err(|e: TermError| ParseError {
            line,
            column,
            kind: ParseErrorKind::MalformedLiteral(e.to_string()),
        })
    }

    pub fn resolve(&self, prefixes: &BTreeMap<String, String>, prefix: &str, local: &str) -> Result<Iri, ParseError> {
        let base = prefixes
            .get(prefix)
            .ok_or_else(|| self.error(ParseErrorKind::UnknownPrefix(prefix.to_string())))?;
        Iri::new(format!("{base}{local}")).map_err(|e| self.error(ParseErrorKind::MalformedIri(e.to_string())))
    }

    /// Reads one RDF term. With `allow_a`, the bare word `a` means `rdf:type`.
    pub fn read_term(&mut self, prefixes: &BTreeMap<String, String>, allow_a: bool) -> Result<Term, ParseError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.read_iri_ref()?)),
            Some('"') => Ok(Term::Literal(self.read_literal(prefixes)?)),
            Some('_') if self.peek_nth(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.read_word();
                if !valid_blank_label(&label) {
                    return Err(self.syntax(format!("invalid blank node label {label:?}")));
                }
                Ok(Term::Blank(label))
            }
            Some(c) if c.is_alphanumeric() || c == ':' || c == '_' => {
                let (line, column) = (self.line, self.column);
                match self.read_name()? {
                    Name::Prefixed { prefix, local } => Ok(Term::Iri(self.resolve(prefixes, &prefix, &local)?)),
                    Name::Bare(w) if allow_a && w == "a" => Ok(Term::Iri(vocab::rdf_type_iri())),
                    Name::Bare(w) => Err(ParseError {
                        line,
                        column,
                        kind: ParseErrorKind::Syntax(format!("unexpected word {w:?}")),
                    }),
                }
            }
            _ => Err(self.syntax(format!("expected a term, found {}", self.describe_next()))),
        }
    }
}

/// Parses one term in N-Triples form (used by serde).
pub fn parse_ntriples_term(text: &str) -> Result<Term, ParseError> {
    let mut cursor = Cursor::new(text);
    cursor.skip_trivia();
    let term = cursor.read_term(&BTreeMap::new(), false)?;
    cursor.skip_trivia();
    if !cursor.at_end() {
        return Err(cursor.syntax("trailing input after term"));
    }
    Ok(term)
}
