//! Parser for the functional-style ontology format and for signature files.
//!
//! ```text
//! Ontology := { CI | RI }
//! CI := "SubClassOf(" C C ")"     RI := "SubObjectPropertyOf(" Name Name ")"
//! C  := Name | "owl:Thing" | "owl:Nothing"
//!     | "ObjectIntersectionOf(" C C {C} ")" | "ObjectUnionOf(" C C {C} ")"
//!     | "ObjectComplementOf(" C ")"
//!     | "ObjectSomeValuesFrom(" Name C ")" | "ObjectAllValuesFrom(" Name C ")"
//! ```
//! Whitespace is insignificant and `#` starts a comment running to the end
//! of the line.

use thiserror::Error;

use crate::syntax::{is_identifier, Axiom, ConceptExpr, ConceptName, Ontology, RoleName, Signature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: expected {expected}, found {found}")]
    Syntax { line: usize, col: usize, expected: String, found: String },
    #[error("duplicate axiom at line {line}: {axiom}")]
    DuplicateAxiom { line: usize, axiom: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Open,
    Close,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' | ')' => {
                chars.next();
                out.push(Token { tok: if c == '(' { Tok::Open } else { Tok::Close }, line, col });
                col += 1;
            }
            c if c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | ':') => {
                let (l0, c0) = (line, col);
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | ':') {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Word(word), line: l0, col: c0 });
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    expected: "axiom".into(),
                    found: format!("'{other}'"),
                })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, t: &Token, expected: &str) -> ParseError {
        let found = match &t.tok {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Open => "'('".into(),
            Tok::Close => "')'".into(),
            Tok::Eof => "end of input".into(),
        };
        ParseError::Syntax { line: t.line, col: t.col, expected: expected.into(), found }
    }

    fn expect_open(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == Tok::Open {
            Ok(())
        } else {
            Err(self.error(&t, "'('"))
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == Tok::Close {
            Ok(())
        } else {
            Err(self.error(&t, "')'"))
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) if is_identifier(w) => Ok(w.clone()),
            _ => Err(self.error(&t, "name")),
        }
    }

    fn axiom(&mut self) -> Result<Axiom, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) if w == "SubClassOf" => {
                self.expect_open()?;
                let lhs = self.concept()?;
                let rhs = self.concept()?;
                self.expect_close()?;
                Ok(Axiom::ci(lhs, rhs))
            }
            Tok::Word(w) if w == "SubObjectPropertyOf" => {
                self.expect_open()?;
                let sub = RoleName::new(&self.name()?);
                let sup = RoleName::new(&self.name()?);
                self.expect_close()?;
                Ok(Axiom::RoleInclusion { sub, sup })
            }
            _ => Err(self.error(&t, "SubClassOf or SubObjectPropertyOf")),
        }
    }

    fn concept(&mut self) -> Result<ConceptExpr, ParseError> {
        let t = self.next();
        let word = match &t.tok {
            Tok::Word(w) => w.clone(),
            Tok::Eof => return Err(self.error(&t, "ConceptExpr or ')'")),
            _ => return Err(self.error(&t, "ConceptExpr")),
        };
        let c = match word.as_str() {
            "owl:Thing" => ConceptExpr::Top,
            "owl:Nothing" => ConceptExpr::Bottom,
            "ObjectIntersectionOf" | "ObjectUnionOf" => {
                self.expect_open()?;
                let mut parts = vec![self.concept()?, self.concept()?];
                while self.peek().tok != Tok::Close {
                    parts.push(self.concept()?);
                }
                self.expect_close()?;
                if word == "ObjectIntersectionOf" {
                    ConceptExpr::and(parts)
                } else {
                    ConceptExpr::or(parts)
                }
            }
            "ObjectComplementOf" => {
                self.expect_open()?;
                let inner = self.concept()?;
                self.expect_close()?;
                ConceptExpr::not(inner)
            }
            "ObjectSomeValuesFrom" | "ObjectAllValuesFrom" => {
                self.expect_open()?;
                let role = RoleName::new(&self.name()?);
                let filler = self.concept()?;
                self.expect_close()?;
                if word == "ObjectSomeValuesFrom" {
                    ConceptExpr::exists(role, filler)
                } else {
                    ConceptExpr::forall(role, filler)
                }
            }
            w if is_identifier(w) => ConceptExpr::Atomic(ConceptName::new(w)),
            _ => return Err(self.error(&t, "ConceptExpr")),
        };
        Ok(c)
    }
}

/// Parses a whole ontology document.
pub fn parse_ontology(text: &str) -> Result<Ontology, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let mut o = Ontology::new("");
    while p.peek().tok != Tok::Eof {
        let line = p.peek().line;
        let ax = p.axiom()?;
        o.push(ax).map_err(|d| ParseError::DuplicateAxiom { line, axiom: d.0 })?;
    }
    Ok(o)
}

/// Parses exactly one axiom (used for goals on the command line and in
/// requests).
pub fn parse_axiom(text: &str) -> Result<Axiom, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let ax = p.axiom()?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return Err(p.error(&t, "end of input"));
    }
    Ok(ax)
}

/// Parses a signature file: one name per line, optionally prefixed with
/// `concept:` or `role:` (bare names are concept names).
pub fn parse_signature(text: &str) -> Result<Signature, ParseError> {
    let mut sig = Signature::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (is_role, name) = if let Some(rest) = line.strip_prefix("role:") {
            (true, rest.trim())
        } else if let Some(rest) = line.strip_prefix("concept:") {
            (false, rest.trim())
        } else {
            (false, line)
        };
        if !is_identifier(name) {
            return Err(ParseError::Syntax {
                line: i + 1,
                col: raw.find(name).map(|c| c + 1).unwrap_or(1),
                expected: "name".into(),
                found: format!("`{name}`"),
            });
        }
        if is_role {
            sig.roles.insert(RoleName::new(name));
        } else {
            sig.concepts.insert(ConceptName::new(name));
        }
    }
    Ok(sig)
}
