//! Finite membership structures, satisfaction and the certificate format.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unsupported term: function symbol `{0}`")]
    UnsupportedTerm(String),
    #[error("set-builder term has no element with its extension")]
    NoDenotation,
    #[error("constant `{0}` has no denotation")]
    UnknownConstant(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
}

/// Universe `0..size`; `member[i][j]` means element `i` is in element `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    pub size: usize,
    pub member: Vec<Vec<bool>>,
    pub denotations: BTreeMap<String, usize>,
}

pub type Env = BTreeMap<String, usize>;

impl Model {
    pub fn new(size: usize) -> Model {
        Model {
            size,
            member: vec![vec![false; size]; size],
            denotations: BTreeMap::new(),
        }
    }

    /// Elements of `j`.
    pub fn extension(&self, j: usize) -> Vec<usize> {
        (0..self.size).filter(|&i| self.member[i][j]).collect()
    }

    /// No two elements have the same members.
    pub fn is_extensional(&self) -> bool {
        (0..self.size).all(|a| {
            (a + 1..self.size)
                .all(|b| (0..self.size).any(|i| self.member[i][a] != self.member[i][b]))
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("size {}\n", self.size);
        for row in &self.member {
            out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        for (c, j) in &self.denotations {
            out.push_str(&format!("den {c} {j}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Model, String> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let size: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("size "))
            .and_then(|n| n.trim().parse().ok())
            .ok_or("expected `size <n>`")?;
        let mut m = Model::new(size);
        for i in 0..size {
            let row = lines.next().ok_or(format!("missing row {i}"))?;
            if row.len() != size || !row.chars().all(|c| c == '0' || c == '1') {
                return Err(format!("row {i} must be {size} digits 0/1"));
            }
            for (j, c) in row.chars().enumerate() {
                m.member[i][j] = c == '1';
            }
        }
        for l in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts.as_slice() {
                ["den", c, j] => {
                    let j: usize = j.parse().map_err(|_| format!("bad index in `{l}`"))?;
                    if j >= size {
                        return Err(format!("index out of range in `{l}`"));
                    }
                    m.denotations.insert(c.to_string(), j);
                }
                _ => return Err(format!("unexpected line `{l}`")),
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn eval_term(m: &Model, t: &Term, env: &Env) -> Result<usize, ModelError> {
    match t {
        Term::Var(v) => env
            .get(v)
            .copied()
            .ok_or_else(|| ModelError::UnboundVariable(v.clone())),
        Term::Const(c) => m
            .denotations
            .get(c)
            .copied()
            .ok_or_else(|| ModelError::UnknownConstant(c.clone())),
        Term::App(f, _) => Err(ModelError::UnsupportedTerm(f.clone())),
        Term::SetAbs(v, body) => {
            let mut inner = env.clone();
            let mut ext = Vec::with_capacity(m.size);
            for i in 0..m.size {
                inner.insert(v.clone(), i);
                ext.push(eval_formula(m, body, &inner)?);
            }
            (0..m.size)
                .find(|&j| (0..m.size).all(|i| m.member[i][j] == ext[i]))
                .ok_or(ModelError::NoDenotation)
        }
    }
}

/// Standard satisfaction: quantifiers range over the universe and `=` is
/// identity of elements.
pub fn eval_formula(m: &Model, f: &Formula, env: &Env) -> Result<bool, ModelError> {
    Ok(match f {
        Formula::Mem(s, t) => {
            let (i, j) = (eval_term(m, s, env)?, eval_term(m, t, env)?);
            m.member[i][j]
        }
        Formula::Eq(s, t) => eval_term(m, s, env)? == eval_term(m, t, env)?,
        Formula::Verum => true,
        Formula::Falsum => false,
        Formula::Not(a) => !eval_formula(m, a, env)?,
        Formula::And(a, b) => eval_formula(m, a, env)? && eval_formula(m, b, env)?,
        Formula::Or(a, b) => eval_formula(m, a, env)? || eval_formula(m, b, env)?,
        Formula::Implies(a, b) => !eval_formula(m, a, env)? || eval_formula(m, b, env)?,
        Formula::Iff(a, b) => eval_formula(m, a, env)? == eval_formula(m, b, env)?,
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut inner = env.clone();
            for i in 0..m.size {
                inner.insert(v.clone(), i);
                if eval_formula(m, a, &inner)? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "PascalCase")]
pub enum SizeClass {
    Slim { members: usize, rest: usize },
    Mighty { members: usize, rest: usize },
    Balanced { members: usize, rest: usize },
}

impl SizeClass {
    pub fn of(members: usize, rest: usize) -> SizeClass {
        match members.cmp(&rest) {
            std::cmp::Ordering::Less => SizeClass::Slim { members, rest },
            std::cmp::Ordering::Greater => SizeClass::Mighty { members, rest },
            std::cmp::Ordering::Equal => SizeClass::Balanced { members, rest },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SizeClass::Slim { .. } => "Slim",
            SizeClass::Mighty { .. } => "Mighty",
            SizeClass::Balanced { .. } => "Balanced",
        }
    }
}

/// Compare the extension of a denoted constant with its complement.
pub fn size_class(m: &Model, constant: &str) -> Option<SizeClass> {
    let j = *m.denotations.get(constant)?;
    let members = m.extension(j).len();
    Some(SizeClass::of(members, m.size - members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn env(pairs: &[(&str, usize)]) -> Env {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn eval_examples() {
        let mut loop1 = Model::new(1);
        loop1.member[0][0] = true;
        let empty1 = Model::new(1);
        let f = parse("x in x").unwrap();
        assert!(eval_formula(&loop1, &f, &env(&[("x", 0)])).unwrap());
        assert!(!eval_formula(&empty1, &f, &env(&[("x", 0)])).unwrap());
        assert!(eval_formula(&empty1, &Formula::Verum, &Env::new()).unwrap());
    }

    #[test]
    fn function_symbols_are_rejected() {
        let f = parse("x in f(x)").unwrap();
        let err = eval_formula(&Model::new(1), &f, &env(&[("x", 0)])).unwrap_err();
        assert_eq!(err, ModelError::UnsupportedTerm("f".into()));
    }

    #[test]
    fn set_builders_denote_matching_elements() {
        let mut m = Model::new(2);
        m.member[0][1] = true;
        // element 1 = {0}, element 0 = {}
        let f = parse("forall y: (y = {z : not (z = z)} | y = {z : z in {w : w = w} | z = z})")
            .unwrap();
        assert_eq!(
            eval_formula(&m, &f, &Env::new()),
            Err(ModelError::NoDenotation)
        );
        let g = parse("exists y: (y = {z : not (z = z)})").unwrap();
        assert!(eval_formula(&m, &g, &Env::new()).unwrap());
    }

    #[test]
    fn size_class_examples() {
        let mut m = Model::new(3);
        m.member[0][2] = true;
        m.denotations.insert("c".into(), 2);
        assert_eq!(
            size_class(&m, "c"),
            Some(SizeClass::Slim {
                members: 1,
                rest: 2
            })
        );
        m.member[1][2] = true;
        assert_eq!(
            size_class(&m, "c"),
            Some(SizeClass::Mighty {
                members: 2,
                rest: 1
            })
        );
        let mut b = Model::new(2);
        b.member[0][1] = true;
        b.denotations.insert("c".into(), 1);
        assert_eq!(
            size_class(&b, "c"),
            Some(SizeClass::Balanced {
                members: 1,
                rest: 1
            })
        );
    }

    #[test]
    fn certificate_text_round_trips() {
        let mut m = Model::new(2);
        m.member[0][1] = true;
        m.member[1][1] = true;
        m.denotations.insert("c0".into(), 1);
        let text = m.to_text();
        assert_eq!(text, "size 2\n01\n01\nden c0 1\n");
        assert_eq!(Model::from_text(&text).unwrap(), m);
        assert!(Model::from_text("size 2\n01\n").is_err());
    }
}
