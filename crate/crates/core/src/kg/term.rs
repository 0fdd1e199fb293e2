use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI must be non-empty and contain no whitespace: {0:?}")]
    BadIri(String),
    #[error("literal cannot carry both a language tag and a datatype")]
    LangAndDatatype,
    #[error("malformed language tag {0:?}")]
    BadLanguageTag(String),
    #[error("malformed blank node label {0:?}")]
    BadBlankLabel(String),
    #[error("triple subject must be an IRI or blank node, got {0}")]
    LiteralSubject(Term),
    #[error("triple predicate must be an IRI, got {0}")]
    NonIriPredicate(Term),
}

/// An absolute or prefix-resolved IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if value.is_empty() || value.chars().any(char::is_whitespace) {
            return Err(TermError::BadIri(value));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The fragment after the last `#`, `/` or `:`; the whole IRI if none.
    pub fn local_name(&self) -> &str {
        self.0
            .rfind(['#', '/', ':'])
            .map(|i| &self.0[i + 1..])
            .filter(|s| !s.is_empty())
            .unwrap_or(&self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    language: Option<String>,
    datatype: Option<Iri>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            language: None,
            datatype: None,
        }
    }

    pub fn with_language(lexical: impl Into<String>, tag: &str) -> Result<Self, TermError> {
        let valid = !tag.is_empty()
            && tag
                .split('-')
                .all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric()))
            && tag.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if !valid {
            return Err(TermError::BadLanguageTag(tag.to_string()));
        }
        Ok(Literal {
            lexical: lexical.into(),
            language: Some(tag.to_ascii_lowercase()),
            datatype: None,
        })
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            language: None,
            datatype: Some(datatype),
        }
    }

    /// Builds a literal from optional parts, enforcing the at-most-one rule.
    pub fn from_parts(
        lexical: impl Into<String>,
        language: Option<&str>,
        datatype: Option<Iri>,
    ) -> Result<Self, TermError> {
        match (language, datatype) {
            (Some(_), Some(_)) => Err(TermError::LangAndDatatype),
            (Some(tag), None) => Literal::with_language(lexical, tag),
            (None, Some(dt)) => Ok(Literal::typed(lexical, dt)),
            (None, None) => Ok(Literal::plain(lexical)),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }
}

pub(crate) fn escape_string(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
}

pub(crate) fn valid_blank_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    !label.ends_with('.')
        && label
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// An RDF term. The derived ordering (IRIs, then literals, then blank
/// nodes) is the canonical S,P,O sort order used for serialization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
    Blank(String),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, TermError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn blank(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        if !valid_blank_label(&label) {
            return Err(TermError::BadBlankLabel(label));
        }
        Ok(Term::Blank(label))
    }

    pub fn literal(lexical: impl Into<String>) -> Self {
        Term::Literal(Literal::plain(lexical))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// Short human-facing name: IRI local name, literal lexical form or blank label.
    pub fn short_name(&self) -> &str {
        match self {
            Term::Iri(iri) => iri.local_name(),
            Term::Literal(lit) => lit.lexical(),
            Term::Blank(label) => label,
        }
    }
}

/// N-Triples rendering.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal(lit) => {
                let mut s = String::with_capacity(lit.lexical.len() + 2);
                s.push('"');
                escape_string(&lit.lexical, &mut s);
                s.push('"');
                if let Some(lang) = &lit.language {
                    s.push('@');
                    s.push_str(lang);
                } else if let Some(dt) = &lit.datatype {
                    s.push_str("^^<");
                    s.push_str(dt.as_str());
                    s.push('>');
                }
                f.write_str(&s)
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        super::lexer::parse_ntriples_term(&text).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Term::Literal(self.clone()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match Term::deserialize(deserializer)? {
            Term::Literal(lit) => Ok(lit),
            other => Err(serde::de::Error::custom(format!("expected a literal, got {other}"))),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}
