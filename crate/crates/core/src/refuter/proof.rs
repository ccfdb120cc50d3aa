//! Proof objects and their line-oriented text form.
//!
//! One step per line: `<id> <rule> <premises> <formula>`, where premises are
//! comma-separated step ids or `-`. Lines starting with `#` are comments.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::Formula;
use crate::parser::parse_sentence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// A sentence of the theory.
    Axiom,
    /// A component of a conjunctive formula.
    Alpha,
    /// The remaining component of a disjunctive formula once the other is refuted.
    BetaUnit,
    /// Instance of a universal formula at a ground term.
    Gamma,
    /// Instance of an existential formula at a fresh constant.
    Delta,
    /// Hypothesis opened for a case split.
    Assume,
    /// Falsum from a disjunctive formula whose two cases both led to Falsum.
    Cases,
    /// Falsum from a complementary pair, or from a falsum-like line.
    Close,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::Alpha => "alpha",
            Rule::BetaUnit => "beta-unit",
            Rule::Gamma => "gamma",
            Rule::Delta => "delta",
            Rule::Assume => "assume",
            Rule::Cases => "cases",
            Rule::Close => "close",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = ();

    fn from_str(s: &str) -> Result<Rule, ()> {
        Ok(match s {
            "axiom" => Rule::Axiom,
            "alpha" => Rule::Alpha,
            "beta-unit" => Rule::BetaUnit,
            "gamma" => Rule::Gamma,
            "delta" => Rule::Delta,
            "assume" => Rule::Assume,
            "cases" => Rule::Cases,
            "close" => Rule::Close,
            _ => return Err(()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// 1-based, consecutive.
    pub id: usize,
    pub rule: Rule,
    pub premises: Vec<usize>,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<Step>,
    /// Term depth of the iterative-deepening level that found the proof.
    pub depth_used: usize,
    /// Rule applications spent by the whole search.
    pub search_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofTextError {
    #[error("line {line}: expected `<id> <rule> <premises> <formula>`")]
    Shape { line: usize },
    #[error("line {line}: bad step id `{text}`")]
    Id { line: usize, text: String },
    #[error("line {line}: unknown rule `{text}`")]
    Rule { line: usize, text: String },
    #[error("line {line}: bad premise list `{text}`")]
    Premises { line: usize, text: String },
    #[error("line {line}: {message}")]
    Formula { line: usize, message: String },
}

impl Proof {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let premises = if s.premises.is_empty() {
                "-".to_string()
            } else {
                s.premises
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            out.push_str(&format!("{} {} {} {}\n", s.id, s.rule, premises, s.formula));
        }
        out
    }

    /// Parse the text form. Budget fields are not part of the text and come
    /// back as zero.
    pub fn from_text(text: &str) -> Result<Proof, ProofTextError> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.splitn(4, char::is_whitespace);
            let (Some(id), Some(rule), Some(premises), Some(formula)) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(ProofTextError::Shape { line });
            };
            let id = id.parse().map_err(|_| ProofTextError::Id {
                line,
                text: id.to_string(),
            })?;
            let rule = rule.parse().map_err(|_| ProofTextError::Rule {
                line,
                text: rule.to_string(),
            })?;
            let premises = if premises == "-" {
                Vec::new()
            } else {
                premises
                    .split(',')
                    .map(|p| p.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| ProofTextError::Premises {
                        line,
                        text: premises.to_string(),
                    })?
            };
            let formula = parse_sentence(formula.trim()).map_err(|e| ProofTextError::Formula {
                line,
                message: e.to_string(),
            })?;
            steps.push(Step {
                id,
                rule,
                premises,
                formula,
            });
        }
        Ok(Proof {
            steps,
            depth_used: 0,
            search_steps: 0,
        })
    }
}
