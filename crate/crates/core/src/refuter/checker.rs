//! Proof checker. Works on the public syntax tree only and shares no code
//! with the search engine.

use std::collections::BTreeSet;

use thiserror::Error;

use super::proof::{Proof, Rule, Step};
use super::theory::Theory;
use crate::formula::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct CheckError {
    pub step: usize,
    pub reason: String,
}

fn fail<T>(step: usize, reason: impl Into<String>) -> Result<T, CheckError> {
    Err(CheckError {
        step,
        reason: reason.into(),
    })
}

pub fn check_proof(theory: &Theory, proof: &Proof) -> bool {
    verify_proof(theory, proof).is_ok()
}

fn complementary(a: &Formula, b: &Formula) -> bool {
    matches!(a, Formula::Not(x) if **x == *b) || matches!(b, Formula::Not(x) if **x == *a)
}

fn neg(f: &Formula) -> Formula {
    Formula::not(f.clone())
}

fn alpha_components(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::And(a, b) => vec![(**a).clone(), (**b).clone()],
        Formula::Iff(a, b) => vec![
            Formula::implies((**a).clone(), (**b).clone()),
            Formula::implies((**b).clone(), (**a).clone()),
        ],
        Formula::Not(g) => match &**g {
            Formula::Or(a, b) => vec![neg(a), neg(b)],
            Formula::Implies(a, b) => vec![(**a).clone(), neg(b)],
            Formula::Not(a) => vec![(**a).clone()],
            _ => Vec::new(),
        },
        _ => Vec::new(),
    }
}

fn beta_components(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::Or(a, b) => Some(((**a).clone(), (**b).clone())),
        Formula::Implies(a, b) => Some((neg(a), (**b).clone())),
        Formula::Not(g) => match &**g {
            Formula::And(a, b) => Some((neg(a), neg(b))),
            Formula::Iff(a, b) => Some((
                Formula::and((**a).clone(), neg(b)),
                Formula::and(neg(a), (**b).clone()),
            )),
            _ => None,
        },
        _ => None,
    }
}

/// The quantified variable and body of a universal-like or
/// existential-like formula, plus whether the instance is negated.
fn quantified(f: &Formula, universal: bool) -> Option<(&str, &Formula, bool)> {
    match (f, universal) {
        (Formula::Forall(v, b), true) | (Formula::Exists(v, b), false) => Some((v, b, false)),
        (Formula::Not(g), _) => match (&**g, universal) {
            (Formula::Exists(v, b), true) | (Formula::Forall(v, b), false) => Some((v, b, true)),
            _ => None,
        },
        _ => None,
    }
}

/// Whether `target` is `pattern` with the free occurrences of `v` replaced
/// by one ground term; returns that term (None when `v` does not occur).
fn instance_of(pattern: &Formula, v: &str, target: &Formula) -> Result<Option<Term>, ()> {
    let mut binding = None;
    if match_formula(pattern, v, target, &mut binding) {
        Ok(binding)
    } else {
        Err(())
    }
}

fn match_formula(p: &Formula, v: &str, t: &Formula, binding: &mut Option<Term>) -> bool {
    match (p, t) {
        (Formula::Mem(a, b), Formula::Mem(c, d)) | (Formula::Eq(a, b), Formula::Eq(c, d)) => {
            match_term(a, v, c, binding) && match_term(b, v, d, binding)
        }
        (Formula::Verum, Formula::Verum) | (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Not(a), Formula::Not(b)) => match_formula(a, v, b, binding),
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Implies(a, b), Formula::Implies(c, d))
        | (Formula::Iff(a, b), Formula::Iff(c, d)) => {
            match_formula(a, v, c, binding) && match_formula(b, v, d, binding)
        }
        (Formula::Forall(w, a), Formula::Forall(u, b))
        | (Formula::Exists(w, a), Formula::Exists(u, b)) => {
            if w != u {
                return false;
            }
            if w == v {
                a == b
            } else {
                match_formula(a, v, b, binding)
            }
        }
        _ => false,
    }
}

fn match_term(p: &Term, v: &str, t: &Term, binding: &mut Option<Term>) -> bool {
    match p {
        Term::Var(n) if n == v => {
            if !t.is_ground() {
                return false;
            }
            match binding {
                Some(b) => b == t,
                None => {
                    *binding = Some(t.clone());
                    true
                }
            }
        }
        Term::App(f, args) => match t {
            Term::App(g, targs) if f == g && args.len() == targs.len() => args
                .iter()
                .zip(targs)
                .all(|(a, b)| match_term(a, v, b, binding)),
            _ => false,
        },
        _ => p == t,
    }
}

fn symbols_of(f: &Formula, out: &mut BTreeSet<String>) {
    out.extend(f.constants());
    out.extend(f.function_symbols().into_iter().map(|(s, _)| s));
}

/// Check every step; the proof must end in Falsum resting on no open
/// hypothesis.
pub fn verify_proof(theory: &Theory, proof: &Proof) -> Result<(), CheckError> {
    let steps = &proof.steps;
    if steps.is_empty() {
        return fail(0, "empty proof");
    }
    let mut used = BTreeSet::new();
    for s in &theory.sentences {
        symbols_of(s, &mut used);
    }
    let mut deps: Vec<BTreeSet<usize>> = Vec::with_capacity(steps.len());
    for (i, step) in steps.iter().enumerate() {
        let id = i + 1;
        if step.id != id {
            return fail(step.id, format!("expected step id {id}"));
        }
        if !step.formula.free_vars().is_empty() {
            return fail(id, "formula has free variables");
        }
        if step.premises.iter().any(|&p| p == 0 || p >= id) {
            return fail(id, "premise does not refer to an earlier step");
        }
        let d = check_step(theory, steps, &deps, &used, step)?;
        deps.push(d);
        symbols_of(&step.formula, &mut used);
    }
    let last = steps.last().expect("non-empty");
    if last.formula != Formula::Falsum {
        return fail(last.id, "last step is not Falsum");
    }
    if !deps[last.id - 1].is_empty() {
        return fail(last.id, "last step rests on undischarged hypotheses");
    }
    Ok(())
}

fn check_step(
    theory: &Theory,
    steps: &[Step],
    deps: &[BTreeSet<usize>],
    used: &BTreeSet<String>,
    step: &Step,
) -> Result<BTreeSet<usize>, CheckError> {
    let id = step.id;
    let prem = |k: usize| &steps[step.premises[k] - 1];
    let prem_deps = |k: usize| deps[step.premises[k] - 1].clone();
    let arity = |n: usize| -> Result<(), CheckError> {
        if step.premises.len() == n {
            Ok(())
        } else {
            fail(id, format!("{} takes {n} premises", step.rule))
        }
    };
    match step.rule {
        Rule::Axiom => {
            arity(0)?;
            if !theory.sentences.contains(&step.formula) {
                return fail(id, "not a sentence of the theory");
            }
            Ok(BTreeSet::new())
        }
        Rule::Assume => {
            arity(0)?;
            Ok(BTreeSet::from([id]))
        }
        Rule::Alpha => {
            arity(1)?;
            if !alpha_components(&prem(0).formula).contains(&step.formula) {
                return fail(id, "not a component of a conjunctive premise");
            }
            Ok(prem_deps(0))
        }
        Rule::BetaUnit => {
            arity(2)?;
            let Some((a, b)) = beta_components(&prem(0).formula) else {
                return fail(id, "first premise is not disjunctive");
            };
            let q = &prem(1).formula;
            let ok = (complementary(q, &a) && step.formula == b)
                || (complementary(q, &b) && step.formula == a);
            if !ok {
                return fail(id, "second premise does not refute the other component");
            }
            let mut d = prem_deps(0);
            d.extend(prem_deps(1));
            Ok(d)
        }
        Rule::Gamma | Rule::Delta => {
            arity(1)?;
            let universal = step.rule == Rule::Gamma;
            let Some((v, body, negated)) = quantified(&prem(0).formula, universal) else {
                return fail(id, "premise has the wrong quantifier");
            };
            let target = if negated {
                match &step.formula {
                    Formula::Not(g) => &**g,
                    _ => return fail(id, "instance must be negated"),
                }
            } else {
                &step.formula
            };
            let Ok(term) = instance_of(body, v, target) else {
                return fail(id, "not an instance of the premise");
            };
            if !universal {
                if let Some(t) = term {
                    let Term::Const(c) = &t else {
                        return fail(id, "witness must be a constant");
                    };
                    if used.contains(c) {
                        return fail(id, format!("witness {c} is not fresh"));
                    }
                }
            }
            Ok(prem_deps(0))
        }
        Rule::Cases => {
            arity(5)?;
            let Some((a, b)) = beta_components(&prem(0).formula) else {
                return fail(id, "first premise is not disjunctive");
            };
            let (h1, f1, h2, f2) = (prem(1), prem(2), prem(3), prem(4));
            if h1.rule != Rule::Assume || h2.rule != Rule::Assume {
                return fail(id, "case hypotheses must be assumptions");
            }
            if h1.formula != a || h2.formula != b {
                return fail(id, "hypotheses do not match the cases");
            }
            if f1.formula != Formula::Falsum || f2.formula != Formula::Falsum {
                return fail(id, "a case does not end in Falsum");
            }
            if step.formula != Formula::Falsum {
                return fail(id, "cases concludes Falsum");
            }
            let mut d = prem_deps(0);
            let mut d1 = prem_deps(2);
            d1.remove(&h1.id);
            let mut d2 = prem_deps(4);
            d2.remove(&h2.id);
            d.extend(d1);
            d.extend(d2);
            Ok(d)
        }
        Rule::Close => {
            if step.formula != Formula::Falsum {
                return fail(id, "close concludes Falsum");
            }
            match step.premises.len() {
                1 => {
                    let p = &prem(0).formula;
                    let falsum_like = *p == Formula::Falsum
                        || matches!(p, Formula::Not(g) if **g == Formula::Verum);
                    if !falsum_like {
                        return fail(id, "premise is not Falsum");
                    }
                    Ok(prem_deps(0))
                }
                2 => {
                    if !complementary(&prem(0).formula, &prem(1).formula) {
                        return fail(id, "premises are not complementary");
                    }
                    let mut d = prem_deps(0);
                    d.extend(prem_deps(1));
                    Ok(d)
                }
                _ => fail(id, "close takes one or two premises"),
            }
        }
    }
}
