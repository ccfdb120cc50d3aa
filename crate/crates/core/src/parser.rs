//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" or)*
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "not" unary | "forall" IDENT ":" formula | "exists" IDENT ":" formula | atom
//! atom    := "Verum" | "Falsum" | term ("in" | "=") term | "(" formula ")"
//! term    := IDENT | "{" IDENT ":" formula "}" | IDENT "(" term ("," term)* ")"
//! ```
//!
//! Binary connectives associate to the left. A quantifier body extends as far
//! right as possible. `#` starts a comment that runs to the end of the line.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Term};

const KEYWORDS: &[&str] = &["not", "forall", "exists", "in", "Verum", "Falsum"];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}:{}: expected {}, found {}",
            self.line,
            self.column,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Kw(k) => format!("`{k}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    const SYMBOLS: &[&str] = &["<->", "->", "|", "&", "=", ":", ",", "(", ")", "{", "}"];
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(word),
            };
            out.push(Spanned {
                tok,
                line,
                column: col,
            });
            col += i - start;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push(Spanned {
                    tok: Tok::Sym(s),
                    line,
                    column: col,
                });
                i += s.len();
                col += s.len();
            }
            None => {
                return Err(ParseError {
                    line,
                    column: col,
                    expected: vec!["token".to_string()],
                    found: format!("character `{c}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
    warnings: Vec<Warning>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: here.tok.describe(),
        }
    }

    fn eat_sym(&mut self, s: &'static str) -> bool {
        if *self.peek() == Tok::Sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &'static str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{s}`")]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.binary_level(0)
    }

    fn binary_level(&mut self, level: usize) -> Result<Formula, ParseError> {
        const OPS: [&str; 4] = ["<->", "->", "|", "&"];
        if level == OPS.len() {
            return self.unary();
        }
        let mut lhs = self.binary_level(level + 1)?;
        while self.eat_sym(OPS[level]) {
            let rhs = self.binary_level(level + 1)?;
            lhs = match level {
                0 => Formula::iff(lhs, rhs),
                1 => Formula::implies(lhs, rhs),
                2 => Formula::or(lhs, rhs),
                _ => Formula::and(lhs, rhs),
            };
        }
        Ok(lhs)
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        let at = self.toks[self.pos].clone();
        let v = self.ident()?;
        if self.scope.contains(&v) {
            self.warnings.push(Warning {
                line: at.line,
                column: at.column,
                message: format!("binder `{v}` shadows an enclosing binder"),
            });
        }
        self.expect_sym(":")?;
        Ok(v)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Kw("not") => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Kw(q @ ("forall" | "exists")) => {
                let universal = *q == "forall";
                self.bump();
                let v = self.binder()?;
                self.scope.push(v.clone());
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                Ok(if universal {
                    Formula::forall(&v, body)
                } else {
                    Formula::exists(&v, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Kw("Verum") => {
                self.bump();
                Ok(Formula::Verum)
            }
            Tok::Kw("Falsum") => {
                self.bump();
                Ok(Formula::Falsum)
            }
            Tok::Sym("(") => {
                self.bump();
                let f = self.formula()?;
                self.expect_sym(")")?;
                Ok(f)
            }
            Tok::Ident(_) | Tok::Sym("{") => {
                let lhs = self.term()?;
                let is_mem = match self.peek() {
                    Tok::Kw("in") => true,
                    Tok::Sym("=") => false,
                    _ => return Err(self.error(&["`in`", "`=`"])),
                };
                self.bump();
                let rhs = self.term()?;
                Ok(if is_mem {
                    Formula::mem(lhs, rhs)
                } else {
                    Formula::eq(lhs, rhs)
                })
            }
            _ => Err(self.error(&["formula"])),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::Sym("(") {
                    self.bump();
                    let mut args = vec![self.term()?];
                    while self.eat_sym(",") {
                        args.push(self.term()?);
                    }
                    self.expect_sym(")")?;
                    Ok(Term::App(name, args))
                } else {
                    Ok(Term::Var(name))
                }
            }
            Tok::Sym("{") => {
                self.bump();
                let v = self.binder()?;
                self.scope.push(v.clone());
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                self.expect_sym("}")?;
                Ok(Term::SetAbs(v, Box::new(body)))
            }
            _ => Err(self.error(&["term"])),
        }
    }
}

/// Parse a formula. Every identifier in term position becomes a variable.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with_warnings(text).map(|(f, _)| f)
}

pub fn parse_with_warnings(text: &str) -> Result<(Formula, Vec<Warning>), ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        scope: Vec::new(),
        warnings: Vec::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of input", "binary connective"]));
    }
    Ok((f, p.warnings))
}

/// Parse a closed formula in which free identifiers denote constants, as in
/// proof listings.
pub fn parse_sentence(text: &str) -> Result<Formula, ParseError> {
    let f = parse(text)?;
    Ok(close_free_vars(&f))
}

/// Turn free variables into constants of the same name.
pub fn close_free_vars(f: &Formula) -> Formula {
    let free: BTreeSet<String> = f.free_vars();
    let mut out = f.clone();
    for v in free {
        out = out.substitute(&v, &Term::Const(v.clone()));
    }
    out
}
