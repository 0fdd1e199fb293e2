//! Scenario-spec text format.
//!
//! ```text
//! domain person = {Helen, Roylott}
//! slots = [night, midnight]
//! pred at(person, place, slot)
//! closed pred adjacent(place, place)
//! fact adjacent(Hall, Study).
//! axiom forall p in person: at(p, Hall, night) -> !at(p, Study, midnight).
//! exactlyone at(p, *, s) forall p, s.
//! atmostone guilty(*).
//! soft 2: at(Helen, Hall, night).
//! ```
//!
//! `slots` declares the domain `slot`. Atoms of a `closed` predicate are
//! true exactly for its facts and never become variables. A quantified
//! variable without `in` takes the domain of its first argument position.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kg::{Cursor, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredDecl {
    pub params: Vec<String>,
    pub closed: bool,
}

/// An argument: a name (variable if bound by a quantifier, else a
/// constant) or `*` inside a cardinality family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arg {
    Name(String),
    Wild,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtomExpr {
    pub pred: String,
    pub args: Vec<Arg>,
}

/// `(variable, domain)`; the domain is inferred when `None`.
pub type Binder = (String, Option<String>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    Const(bool),
    Atom(AtomExpr),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Forall(Vec<Binder>, Box<Expr>),
    Exists(Vec<Binder>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CardinalityKind {
    ExactlyOne,
    AtMostOne,
}

/// One constraint per binding of `forall`, over the atoms obtained by
/// filling the `*` positions with every value of their domains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cardinality {
    pub kind: CardinalityKind,
    pub family: AtomExpr,
    pub forall: Vec<Binder>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    /// Values keep declaration order.
    pub domains: BTreeMap<String, Vec<String>>,
    pub slots: Vec<String>,
    pub preds: BTreeMap<String, PredDecl>,
    pub facts: Vec<AtomExpr>,
    pub axioms: Vec<Expr>,
    pub cardinality: Vec<Cardinality>,
    pub soft: Vec<(Expr, u64)>,
}

pub const SLOT_DOMAIN: &str = "slot";

impl ScenarioSpec {
    /// The values of `name`, `slot` included.
    pub fn domain(&self, name: &str) -> Option<&[String]> {
        if name == SLOT_DOMAIN && !self.domains.contains_key(SLOT_DOMAIN) {
            return Some(&self.slots);
        }
        self.domains.get(name).map(|v| v.as_slice())
    }
}

impl fmt::Display for AtomExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match a {
                Arg::Name(n) => write!(f, "{n}")?,
                Arg::Wild => write!(f, "*")?,
            }
        }
        write!(f, ")")
    }
}

struct Parser<'a> {
    cur: Cursor<'a>,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn ident(&mut self) -> Result<String, ParseError> {
        self.cur.skip_trivia();
        let mut s = String::new();
        while let Some(c) = self.cur.peek().filter(|&c| is_ident_char(c)) {
            s.push(c);
            self.cur.bump();
        }
        if s.is_empty() {
            return Err(self
                .cur
                .syntax(format!("expected a name, found {}", self.cur.describe_next())));
        }
        Ok(s)
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        let rest = self.cur.rest();
        rest.starts_with(kw) && !rest[kw.len()..].starts_with(is_ident_char)
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.cur.skip_trivia();
        if self.peek_keyword(kw) {
            self.cur.eat_str(kw);
            true
        } else {
            false
        }
    }

    fn punct(&mut self, p: &str) -> bool {
        self.cur.skip_trivia();
        self.cur.eat_str(p)
    }

    fn expect(&mut self, p: &str) -> Result<(), ParseError> {
        if self.punct(p) {
            Ok(())
        } else {
            Err(self
                .cur
                .syntax(format!("expected {p:?}, found {}", self.cur.describe_next())))
        }
    }

    fn name_list(&mut self, open: &str, close: &str) -> Result<Vec<String>, ParseError> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.punct(close) {
            return Ok(out);
        }
        loop {
            out.push(self.ident()?);
            if self.punct(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn atom(&mut self, allow_wild: bool) -> Result<AtomExpr, ParseError> {
        let pred = self.ident()?;
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.punct(")") {
            loop {
                if self.punct("*") {
                    if !allow_wild {
                        return Err(self.cur.syntax("`*` is only allowed in a cardinality family"));
                    }
                    args.push(Arg::Wild);
                } else {
                    args.push(Arg::Name(self.ident()?));
                }
                if self.punct(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(AtomExpr { pred, args })
    }

    fn binders(&mut self) -> Result<Vec<Binder>, ParseError> {
        let mut out = Vec::new();
        loop {
            let v = self.ident()?;
            let d = if self.keyword("in") { Some(self.ident()?) } else { None };
            out.push((v, d));
            if !self.punct(",") {
                return Ok(out);
            }
        }
    }

    // formula := quant | iff
    // iff := imp ('<->' imp)*      imp := or ('->' imp)?
    // or := and ('|' and)*         and := unary ('&' unary)*
    fn formula(&mut self) -> Result<Expr, ParseError> {
        for (kw, forall) in [("forall", true), ("exists", false)] {
            if self.keyword(kw) {
                let bs = self.binders()?;
                self.expect(":")?;
                let body = Box::new(self.formula()?);
                return Ok(if forall {
                    Expr::Forall(bs, body)
                } else {
                    Expr::Exists(bs, body)
                });
            }
        }
        let mut lhs = self.implication()?;
        while self.punct("<->") {
            let rhs = self.implication()?;
            lhs = Expr::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.disjunction()?;
        if self.punct("->") {
            let rhs = self.implication_rhs()?;
            return Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    /// A quantifier may open the right-hand side of `->`.
    fn implication_rhs(&mut self) -> Result<Expr, ParseError> {
        self.cur.skip_trivia();
        if self.peek_keyword("forall") || self.peek_keyword("exists") {
            self.formula()
        } else {
            self.implication()
        }
    }

    fn disjunction(&mut self) -> Result<Expr, ParseError> {
        let mut items = vec![self.conjunction()?];
        while self.punct("|") {
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expr::Or(items)
        })
    }

    fn conjunction(&mut self) -> Result<Expr, ParseError> {
        let mut items = vec![self.unary()?];
        while self.punct("&") {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expr::And(items)
        })
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.punct("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if self.punct("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        self.cur.skip_trivia();
        if self.peek_keyword("forall") || self.peek_keyword("exists") {
            return self.formula();
        }
        if self.keyword("true") {
            return Ok(Expr::Const(true));
        }
        if self.keyword("false") {
            return Ok(Expr::Const(false));
        }
        Ok(Expr::Atom(self.atom(false)?))
    }

    fn statement(&mut self, spec: &mut ScenarioSpec) -> Result<(), ParseError> {
        if self.keyword("domain") {
            let name = self.ident()?;
            self.expect("=")?;
            let values = self.name_list("{", "}")?;
            spec.domains.insert(name, values);
            self.punct(".");
        } else if self.keyword("slots") {
            self.expect("=")?;
            spec.slots = self.name_list("[", "]")?;
            self.punct(".");
        } else if self.keyword("closed") {
            if !self.keyword("pred") {
                return Err(self.cur.syntax("expected `pred` after `closed`"));
            }
            self.pred_decl(spec, true)?;
        } else if self.keyword("pred") {
            self.pred_decl(spec, false)?;
        } else if self.keyword("fact") {
            let a = self.atom(false)?;
            spec.facts.push(a);
            self.expect(".")?;
        } else if self.keyword("axiom") {
            let f = self.formula()?;
            spec.axioms.push(f);
            self.expect(".")?;
        } else if self.keyword("soft") {
            self.cur.skip_trivia();
            let at = self.cur.clone();
            let w = self.ident()?;
            let w: u64 = w
                .parse()
                .ok()
                .filter(|&w| w >= 1)
                .ok_or_else(|| at.syntax(format!("soft weight must be a positive integer, found {w:?}")))?;
            self.expect(":")?;
            let f = self.formula()?;
            spec.soft.push((f, w));
            self.expect(".")?;
        } else if let Some(kind) = self.cardinality_keyword() {
            let family = self.atom(true)?;
            let forall = if self.keyword("forall") {
                self.binders()?
            } else {
                Vec::new()
            };
            spec.cardinality.push(Cardinality { kind, family, forall });
            self.expect(".")?;
        } else {
            return Err(self
                .cur
                .syntax(format!("expected a statement, found {}", self.cur.describe_next())));
        }
        Ok(())
    }

    fn cardinality_keyword(&mut self) -> Option<CardinalityKind> {
        if self.keyword("exactlyone") {
            Some(CardinalityKind::ExactlyOne)
        } else if self.keyword("atmostone") {
            Some(CardinalityKind::AtMostOne)
        } else {
            None
        }
    }

    fn pred_decl(&mut self, spec: &mut ScenarioSpec, closed: bool) -> Result<(), ParseError> {
        let name = self.ident()?;
        let params = self.name_list("(", ")")?;
        spec.preds.insert(name, PredDecl { params, closed });
        self.punct(".");
        Ok(())
    }
}

/// Parses a scenario spec. Symbols are checked by grounding, not here.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec, ParseError> {
    let mut p = Parser { cur: Cursor::new(text) };
    let mut spec = ScenarioSpec::default();
    loop {
        p.cur.skip_trivia();
        if p.cur.at_end() {
            return Ok(spec);
        }
        p.statement(&mut spec)?;
    }
}
