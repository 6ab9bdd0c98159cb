//! Concrete ASCII syntax.
//!
//! ```text
//! formula := "forall" var "." formula | "exists" var "." formula | iff ;
//! iff     := imp { "<->" imp } ;
//! imp     := or [ "->" imp ] ;
//! or      := and { "|" and } ;
//! and     := neg { "&" neg } ;
//! neg     := "~" neg | atom ;
//! atom    := term "in" term | term "=" term | "S(" term ")" | "(" formula ")" ;
//! term    := var | "<" term "," term ">" ;
//! ```
//!
//! Untyped variables are bare identifiers. In the sorted syntax every
//! variable is written `x@k`, and pair terms and `S(..)` are not available.

use std::fmt;

use thiserror::Error;

use crate::syntax::{is_identifier, Connective, Formula, Quantifier, Term, TypedVar, Var, Variable};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    At,
    Dot,
    LParen,
    RParen,
    Lt,
    Gt,
    Comma,
    Equals,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Forall,
    Exists,
    In,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Num(s) => write!(f, "number `{s}`"),
            Tok::End => f.write_str("end of input"),
            other => write!(f, "`{}`", other.text()),
        }
    }
}

impl Tok {
    fn text(&self) -> &'static str {
        match self {
            Tok::At => "@",
            Tok::Dot => ".",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Comma => ",",
            Tok::Equals => "=",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Arrow => "->",
            Tok::DArrow => "<->",
            Tok::Forall => "forall",
            Tok::Exists => "exists",
            Tok::In => "in",
            Tok::Ident(_) | Tok::Num(_) | Tok::End => "",
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            match &input[start..i] {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "in" => Tok::In,
                word => Tok::Ident(word.to_string()),
            }
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Num(input[start..i].to_string())
        } else {
            let rest = &input[i..];
            let (tok, len) = if rest.starts_with("<->") {
                (Tok::DArrow, 3)
            } else if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else {
                let t = match c {
                    b'@' => Tok::At,
                    b'.' => Tok::Dot,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'<' => Tok::Lt,
                    b'>' => Tok::Gt,
                    b',' => Tok::Comma,
                    b'=' => Tok::Equals,
                    b'~' => Tok::Tilde,
                    b'&' => Tok::Amp,
                    b'|' => Tok::Bar,
                    _ => {
                        let ch = rest.chars().next().unwrap_or('?');
                        return Err(ParseError {
                            position: i,
                            expected: vec!["a token".into()],
                            found: format!("character `{ch}`"),
                        });
                    }
                };
                (t, 1)
            };
            i += len;
            tok
        };
        out.push((start, tok));
    }
    out.push((input.len(), Tok::End));
    Ok(out)
}

/// Variable kinds the parser can build.
pub trait ParseVariable: Variable {
    #[doc(hidden)]
    fn from_token(name: String, sort: Option<usize>) -> Self;
}

impl ParseVariable for Var {
    fn from_token(name: String, _sort: Option<usize>) -> Self {
        Var::new(name)
    }
}

impl ParseVariable for TypedVar {
    fn from_token(name: String, sort: Option<usize>) -> Self {
        TypedVar::new(name, sort.unwrap_or(0))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    typed: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError {
            position: *position,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{}`", tok.text())]))
        }
    }

    fn variable<V: ParseVariable>(&mut self) -> Result<V, ParseError> {
        let name = match self.peek() {
            Tok::Ident(name) => name.clone(),
            _ => return Err(self.error(&["identifier"])),
        };
        debug_assert!(is_identifier(&name));
        self.bump();
        if !self.typed {
            return Ok(V::from_token(name, None));
        }
        self.expect(Tok::At)?;
        let sort = match self.peek() {
            Tok::Num(n) => n.parse::<usize>().map_err(|_| self.error(&["sort index"]))?,
            _ => return Err(self.error(&["sort index"])),
        };
        self.bump();
        Ok(V::from_token(name, Some(sort)))
    }

    fn formula<V: ParseVariable>(&mut self) -> Result<Formula<V>, ParseError> {
        let q = match self.peek() {
            Tok::Forall => Some(Quantifier::Forall),
            Tok::Exists => Some(Quantifier::Exists),
            _ => None,
        };
        if let Some(q) = q {
            self.bump();
            let v = self.variable()?;
            self.expect(Tok::Dot)?;
            let body = self.formula()?;
            return Ok(Formula::Quant(q, v, Box::new(body)));
        }
        self.iff()
    }

    fn iff<V: ParseVariable>(&mut self) -> Result<Formula<V>, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::binary(Connective::Iff, lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp<V: ParseVariable>(&mut self) -> Result<Formula<V>, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::binary(Connective::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or<V: ParseVariable>(&mut self) -> Result<Formula<V>, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::binary(Connective::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and<V: ParseVariable>(&mut self) -> Result<Formula<V>, ParseError> {
        let mut lhs = self.neg()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.neg()?;
            lhs = Formula::binary(Connective::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn neg<V: ParseVariable>(&mut self) -> Result<Formula<V>, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Formula::not(self.neg()?));
        }
        self.atom()
    }

    fn atom<V: ParseVariable>(&mut self) -> Result<Formula<V>, ParseError> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if !self.typed && name == "S" && *self.peek2() == Tok::LParen => {
                self.bump();
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Set(t))
            }
            Tok::Ident(_) | Tok::Lt => {
                let s = self.term()?;
                match self.peek() {
                    Tok::In => {
                        self.bump();
                        Ok(Formula::Mem(s, self.term()?))
                    }
                    Tok::Equals => {
                        self.bump();
                        Ok(Formula::Eq(s, self.term()?))
                    }
                    _ => Err(self.error(&["`in`", "`=`"])),
                }
            }
            _ => {
                let mut expected = vec!["identifier", "`(`", "`~`"];
                if !self.typed {
                    expected.extend(["`<`", "`S(`"]);
                }
                Err(self.error(&expected))
            }
        }
    }

    fn term<V: ParseVariable>(&mut self) -> Result<Term<V>, ParseError> {
        match self.peek() {
            Tok::Lt if !self.typed => {
                self.bump();
                let l = self.term()?;
                self.expect(Tok::Comma)?;
                let r = self.term()?;
                self.expect(Tok::Gt)?;
                Ok(Term::pair(l, r))
            }
            Tok::Ident(_) => Ok(Term::Var(self.variable()?)),
            _ => {
                if self.typed {
                    Err(self.error(&["identifier"]))
                } else {
                    Err(self.error(&["identifier", "`<`"]))
                }
            }
        }
    }
}

pub fn parse_with<V: ParseVariable>(text: &str) -> Result<Formula<V>, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        typed: V::TYPED,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        let mut expected = vec!["end of input", "`<->`", "`->`", "`|`", "`&`"];
        if p.pos > 0 && matches!(p.toks[p.pos - 1].1, Tok::Ident(_) | Tok::Num(_) | Tok::Gt) {
            expected.clear();
            expected.extend(["end of input", "a connective"]);
        }
        return Err(p.error(&expected));
    }
    Ok(f)
}

/// Parses an untyped formula (pairs and `S(..)` allowed).
pub fn parse_formula(text: &str) -> Result<Formula<Var>, ParseError> {
    parse_with(text)
}

/// Parses a sorted formula, every variable written `x@k`.
pub fn parse_typed_formula(text: &str) -> Result<Formula<TypedVar>, ParseError> {
    parse_with(text)
}
