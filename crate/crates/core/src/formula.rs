//! Abstract syntax for the membership language: one binary predicate `in`,
//! identity, and the set-builder `{v : body}` as the only term former besides
//! plain function application.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// The variable every candidate predicate is renamed to before it is analysed.
pub const CANONICAL_VAR: &str = "x";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    SetAbs(String, Box<Formula>),
    App(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Mem(Term, Term),
    Eq(Term, Term),
    Verum,
    Falsum,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

pub fn constant(name: &str) -> Term {
    Term::Const(name.to_string())
}

pub fn set_abs(v: &str, body: Formula) -> Term {
    Term::SetAbs(v.to_string(), Box::new(body))
}

impl Formula {
    pub fn mem(lhs: Term, rhs: Term) -> Formula {
        Formula::Mem(lhs, rhs)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    /// Conjunction of a non-empty list, associated to the left.
    pub fn and_all(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "and_all of an empty list");
        let first = parts.remove(0);
        parts.into_iter().fold(first, Formula::and)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Mem(..) | Formula::Eq(..))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free_formula(self, &mut bound, &mut out);
        out
    }

    pub fn has_free(&self, v: &str) -> bool {
        self.free_vars().contains(v)
    }

    /// Number of formula-typed nodes, counting bodies of set abstractions.
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Longest chain of nested quantifiers (set-builder binders do not count).
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Mem(..) | Formula::Eq(..) | Formula::Verum | Formula::Falsum => 0,
            Formula::Not(a) => a.quantifier_depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.quantifier_depth(),
        }
    }

    /// Syntactic depth of the formula tree (an atom has depth 1).
    pub fn depth(&self) -> usize {
        match self {
            Formula::Mem(..) | Formula::Eq(..) | Formula::Verum | Formula::Falsum => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Pre-order visit of every formula node, descending into set-builder bodies.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a Formula)) {
        visit(self);
        match self {
            Formula::Mem(s, t) | Formula::Eq(s, t) => {
                s.walk_formulas(visit);
                t.walk_formulas(visit);
            }
            Formula::Verum | Formula::Falsum => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.walk(visit),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
        }
    }

    /// Every identifier used anywhere: variables (free or bound), constants
    /// and function symbols.
    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            Formula::Mem(s, t) | Formula::Eq(s, t) => {
                s.collect_identifiers(&mut out);
                t.collect_identifiers(&mut out);
            }
            _ => {}
        });
        out
    }

    /// Function symbols with their arities.
    pub fn function_symbols(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Mem(s, t) | Formula::Eq(s, t) = f {
                s.collect_functions(&mut out);
                t.collect_functions(&mut out);
            }
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Mem(s, t) | Formula::Eq(s, t) = f {
                s.collect_constants(&mut out);
                t.collect_constants(&mut out);
            }
        });
        out
    }

    pub fn contains_set_abs(&self) -> bool {
        let mut found = false;
        self.walk(&mut |f| {
            if let Formula::Mem(s, t) | Formula::Eq(s, t) = f {
                found |= s.contains_set_abs() || t.contains_set_abs();
            }
        });
        found
    }

    /// Capture-avoiding substitution of `t` for the free occurrences of `v`.
    pub fn substitute(&self, v: &str, t: &Term) -> Formula {
        let t_free = t.free_vars();
        subst_formula(self, v, t, &t_free)
    }

    /// Replace every free variable named in `map` by the corresponding term.
    /// Binders are renamed when they would capture a variable of a replacement.
    pub fn substitute_many(&self, map: &BTreeMap<String, Term>) -> Formula {
        // Sequential substitution through fresh intermediate names keeps the
        // replacements from interfering with one another.
        let mut avoid = self.identifiers();
        for t in map.values() {
            avoid.extend(t.free_vars());
        }
        let mut staged = self.clone();
        let mut temps = Vec::new();
        for (k, t) in map {
            let tmp = fresh_name("sub", &avoid);
            avoid.insert(tmp.clone());
            staged = staged.substitute(k, &Term::Var(tmp.clone()));
            temps.push((tmp, t));
        }
        for (tmp, t) in temps {
            staged = staged.substitute(&tmp, t);
        }
        staged
    }

    /// Rename bound variables whose names appear in `reserved`.
    pub fn rename_bound_avoiding(&self, reserved: &BTreeSet<String>) -> Formula {
        let mut avoid: BTreeSet<String> = reserved.clone();
        avoid.extend(self.identifiers());
        rename_formula(self, reserved, &mut avoid)
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_formula(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Every subformula in pre-order (set-builder bodies included), each with
    /// the variables free in that occurrence.
    pub fn subformulas(&self) -> Vec<(Formula, BTreeSet<String>)> {
        let mut out = Vec::new();
        self.walk(&mut |f| out.push((f.clone(), f.free_vars())));
        out
    }

    /// Bound-variable names shadowing an enclosing binder of the same name.
    pub fn shadowed_binders(&self) -> Vec<String> {
        let mut out = Vec::new();
        shadow_formula(self, &mut Vec::new(), &mut out);
        out
    }
}

impl Term {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free_term(self, &mut Vec::new(), &mut out);
        out
    }

    fn walk_formulas<'a>(&'a self, visit: &mut dyn FnMut(&'a Formula)) {
        match self {
            Term::Var(_) | Term::Const(_) => {}
            Term::SetAbs(_, body) => body.walk(visit),
            Term::App(_, args) => args.iter().for_each(|a| a.walk_formulas(visit)),
        }
    }

    fn collect_identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(n) | Term::Const(n) => {
                out.insert(n.clone());
            }
            Term::SetAbs(v, _) => {
                out.insert(v.clone());
            }
            Term::App(f, args) => {
                out.insert(f.clone());
                args.iter().for_each(|a| a.collect_identifiers(out));
            }
        }
    }

    fn collect_functions(&self, out: &mut BTreeSet<(String, usize)>) {
        if let Term::App(f, args) = self {
            out.insert((f.clone(), args.len()));
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_constants(out)),
            _ => {}
        }
    }

    pub fn contains_set_abs(&self) -> bool {
        match self {
            Term::SetAbs(..) => true,
            Term::App(_, args) => args.iter().any(Term::contains_set_abs),
            _ => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) | Term::SetAbs(..) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Nesting depth of a ground term: constants are 1, `f(t..)` is one more
    /// than its deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 1,
        }
    }

    pub fn substitute(&self, v: &str, t: &Term) -> Term {
        let t_free = t.free_vars();
        subst_term(self, v, t, &t_free)
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_term(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

/// `base`, `base1`, `base2`, ... whichever is first absent from `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded")
}

fn collect_free_formula(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match f {
        Formula::Mem(s, t) | Formula::Eq(s, t) => {
            collect_free_term(s, bound, out);
            collect_free_term(t, bound, out);
        }
        Formula::Verum | Formula::Falsum => {}
        Formula::Not(a) => collect_free_formula(a, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_free_formula(a, bound, out);
            collect_free_formula(b, bound, out);
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            bound.push(v.clone());
            collect_free_formula(a, bound, out);
            bound.pop();
        }
    }
}

fn collect_free_term(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(n) => {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        }
        Term::Const(_) => {}
        Term::SetAbs(v, body) => {
            bound.push(v.clone());
            collect_free_formula(body, bound, out);
            bound.pop();
        }
        Term::App(_, args) => args.iter().for_each(|a| collect_free_term(a, bound, out)),
    }
}

fn subst_formula(f: &Formula, v: &str, t: &Term, t_free: &BTreeSet<String>) -> Formula {
    let rec = |g: &Formula| subst_formula(g, v, t, t_free);
    match f {
        Formula::Mem(a, b) => {
            Formula::Mem(subst_term(a, v, t, t_free), subst_term(b, v, t, t_free))
        }
        Formula::Eq(a, b) => Formula::Eq(subst_term(a, v, t, t_free), subst_term(b, v, t, t_free)),
        Formula::Verum => Formula::Verum,
        Formula::Falsum => Formula::Falsum,
        Formula::Not(a) => Formula::not(rec(a)),
        Formula::And(a, b) => Formula::and(rec(a), rec(b)),
        Formula::Or(a, b) => Formula::or(rec(a), rec(b)),
        Formula::Implies(a, b) => Formula::implies(rec(a), rec(b)),
        Formula::Iff(a, b) => Formula::iff(rec(a), rec(b)),
        Formula::Forall(w, body) => {
            let (w, body) = subst_binder(w, body, v, t, t_free);
            Formula::Forall(w, Box::new(body))
        }
        Formula::Exists(w, body) => {
            let (w, body) = subst_binder(w, body, v, t, t_free);
            Formula::Exists(w, Box::new(body))
        }
    }
}

fn subst_binder(
    w: &str,
    body: &Formula,
    v: &str,
    t: &Term,
    t_free: &BTreeSet<String>,
) -> (String, Formula) {
    if w == v {
        return (w.to_string(), body.clone());
    }
    let body_free = body.free_vars();
    if !body_free.contains(v) {
        return (w.to_string(), body.clone());
    }
    if t_free.contains(w) {
        let mut avoid = body.identifiers();
        avoid.extend(t_free.iter().cloned());
        avoid.insert(v.to_string());
        let fresh = fresh_name(w, &avoid);
        let renamed = body.substitute(w, &Term::Var(fresh.clone()));
        (fresh, subst_formula(&renamed, v, t, t_free))
    } else {
        (w.to_string(), subst_formula(body, v, t, t_free))
    }
}

fn subst_term(term: &Term, v: &str, t: &Term, t_free: &BTreeSet<String>) -> Term {
    match term {
        Term::Var(n) if n == v => t.clone(),
        Term::Var(_) | Term::Const(_) => term.clone(),
        Term::SetAbs(w, body) => {
            let (w, body) = subst_binder(w, body, v, t, t_free);
            Term::SetAbs(w, Box::new(body))
        }
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| subst_term(a, v, t, t_free)).collect(),
        ),
    }
}

fn rename_formula(
    f: &Formula,
    reserved: &BTreeSet<String>,
    avoid: &mut BTreeSet<String>,
) -> Formula {
    let rec = |g: &Formula, avoid: &mut BTreeSet<String>| rename_formula(g, reserved, avoid);
    match f {
        Formula::Mem(a, b) => Formula::Mem(
            rename_term(a, reserved, avoid),
            rename_term(b, reserved, avoid),
        ),
        Formula::Eq(a, b) => Formula::Eq(
            rename_term(a, reserved, avoid),
            rename_term(b, reserved, avoid),
        ),
        Formula::Verum | Formula::Falsum => f.clone(),
        Formula::Not(a) => Formula::not(rec(a, avoid)),
        Formula::And(a, b) => Formula::and(rec(a, avoid), rec(b, avoid)),
        Formula::Or(a, b) => Formula::or(rec(a, avoid), rec(b, avoid)),
        Formula::Implies(a, b) => Formula::implies(rec(a, avoid), rec(b, avoid)),
        Formula::Iff(a, b) => Formula::iff(rec(a, avoid), rec(b, avoid)),
        Formula::Forall(w, body) | Formula::Exists(w, body) => {
            let (w2, body2) = rename_binder(w, body, reserved, avoid);
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(w2, Box::new(body2))
            } else {
                Formula::Exists(w2, Box::new(body2))
            }
        }
    }
}

fn rename_binder(
    w: &str,
    body: &Formula,
    reserved: &BTreeSet<String>,
    avoid: &mut BTreeSet<String>,
) -> (String, Formula) {
    let body = rename_formula(body, reserved, avoid);
    if reserved.contains(w) {
        let fresh = fresh_name(w, avoid);
        avoid.insert(fresh.clone());
        let body = body.substitute(w, &Term::Var(fresh.clone()));
        (fresh, body)
    } else {
        (w.to_string(), body)
    }
}

fn rename_term(t: &Term, reserved: &BTreeSet<String>, avoid: &mut BTreeSet<String>) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::SetAbs(w, body) => {
            let (w, body) = rename_binder(w, body, reserved, avoid);
            Term::SetAbs(w, Box::new(body))
        }
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter()
                .map(|a| rename_term(a, reserved, avoid))
                .collect(),
        ),
    }
}

fn alpha_formula(a: &Formula, b: &Formula, la: &mut Vec<String>, lb: &mut Vec<String>) -> bool {
    match (a, b) {
        (Formula::Mem(s1, t1), Formula::Mem(s2, t2))
        | (Formula::Eq(s1, t1), Formula::Eq(s2, t2)) => {
            alpha_term(s1, s2, la, lb) && alpha_term(t1, t2, la, lb)
        }
        (Formula::Verum, Formula::Verum) | (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Not(x), Formula::Not(y)) => alpha_formula(x, y, la, lb),
        (Formula::And(x1, y1), Formula::And(x2, y2))
        | (Formula::Or(x1, y1), Formula::Or(x2, y2))
        | (Formula::Implies(x1, y1), Formula::Implies(x2, y2))
        | (Formula::Iff(x1, y1), Formula::Iff(x2, y2)) => {
            alpha_formula(x1, x2, la, lb) && alpha_formula(y1, y2, la, lb)
        }
        (Formula::Forall(v1, x), Formula::Forall(v2, y))
        | (Formula::Exists(v1, x), Formula::Exists(v2, y)) => {
            la.push(v1.clone());
            lb.push(v2.clone());
            let r = alpha_formula(x, y, la, lb);
            la.pop();
            lb.pop();
            r
        }
        _ => false,
    }
}

fn alpha_term(a: &Term, b: &Term, la: &mut Vec<String>, lb: &mut Vec<String>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let ix = la.iter().rposition(|n| n == x);
            let iy = lb.iter().rposition(|n| n == y);
            match (ix, iy) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::SetAbs(v1, x), Term::SetAbs(v2, y)) => {
            la.push(v1.clone());
            lb.push(v2.clone());
            let r = alpha_formula(x, y, la, lb);
            la.pop();
            lb.pop();
            r
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, la, lb))
        }
        _ => false,
    }
}

fn shadow_formula(f: &Formula, scope: &mut Vec<String>, out: &mut Vec<String>) {
    match f {
        Formula::Mem(s, t) | Formula::Eq(s, t) => {
            shadow_term(s, scope, out);
            shadow_term(t, scope, out);
        }
        Formula::Verum | Formula::Falsum => {}
        Formula::Not(a) => shadow_formula(a, scope, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            shadow_formula(a, scope, out);
            shadow_formula(b, scope, out);
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            if scope.contains(v) {
                out.push(v.clone());
            }
            scope.push(v.clone());
            shadow_formula(a, scope, out);
            scope.pop();
        }
    }
}

fn shadow_term(t: &Term, scope: &mut Vec<String>, out: &mut Vec<String>) {
    match t {
        Term::Var(_) | Term::Const(_) => {}
        Term::SetAbs(v, body) => {
            if scope.contains(v) {
                out.push(v.clone());
            }
            scope.push(v.clone());
            shadow_formula(body, scope, out);
            scope.pop();
        }
        Term::App(_, args) => args.iter().for_each(|a| shadow_term(a, scope, out)),
    }
}

/// A formula with exactly one free variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearlyClosed {
    formula: Formula,
    the_var: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not nearly closed: free variables {{{}}}", .free_vars.iter().cloned().collect::<Vec<_>>().join(", "))]
pub struct Rejection {
    pub free_vars: BTreeSet<String>,
}

pub fn nearly_closed(f: &Formula) -> Result<NearlyClosed, Rejection> {
    let free_vars = f.free_vars();
    if free_vars.len() == 1 {
        let the_var = free_vars.into_iter().next().expect("one element");
        Ok(NearlyClosed {
            formula: f.clone(),
            the_var,
        })
    } else {
        Err(Rejection { free_vars })
    }
}

impl NearlyClosed {
    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn the_var(&self) -> &str {
        &self.the_var
    }

    /// The formula with its free variable renamed to `x`.
    pub fn canonical(&self) -> Formula {
        if self.the_var == CANONICAL_VAR {
            self.formula.clone()
        } else {
            self.formula.substitute(&self.the_var, &var(CANONICAL_VAR))
        }
    }

    /// Canonical form packaged again as a nearly-closed formula.
    pub fn canonicalized(&self) -> NearlyClosed {
        NearlyClosed {
            formula: self.canonical(),
            the_var: CANONICAL_VAR.to_string(),
        }
    }

    /// `¬A`, stripping one existing negation instead of stacking two.
    pub fn negated(&self) -> NearlyClosed {
        let formula = match &self.formula {
            Formula::Not(inner) => (**inner).clone(),
            f => Formula::not(f.clone()),
        };
        NearlyClosed {
            formula,
            the_var: self.the_var.clone(),
        }
    }
}

/// `B & (x = x)`: the wrapper that turns a closed predicate into a
/// nearly-closed one without changing its extension.
pub fn wrap_closed(f: &Formula) -> Formula {
    Formula::and(
        f.clone(),
        Formula::eq(var(CANONICAL_VAR), var(CANONICAL_VAR)),
    )
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(&crate::printer::print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(&crate::printer::print_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(parse("not (x in x)").unwrap().free_vars(), set(&["x"]));
        assert_eq!(
            parse("forall y: (y in x)").unwrap().free_vars(),
            set(&["x"])
        );
        assert_eq!(
            parse("{x : x in y} in z").unwrap().free_vars(),
            set(&["y", "z"])
        );
    }

    #[test]
    fn nearly_closed_examples() {
        let nc = nearly_closed(&parse("not (x in x)").unwrap()).unwrap();
        assert_eq!(nc.the_var(), "x");
        assert_eq!(
            nearly_closed(&Formula::Verum).unwrap_err().free_vars,
            set(&[])
        );
        assert_eq!(
            nearly_closed(&parse("x in y").unwrap())
                .unwrap_err()
                .free_vars,
            set(&["x", "y"])
        );
    }

    #[test]
    fn canonical_renames_the_free_variable() {
        let nc = nearly_closed(&parse("not (y in y)").unwrap()).unwrap();
        assert_eq!(nc.canonical(), parse("not (x in x)").unwrap());
        // a binder named x must not capture the renamed variable
        let nc = nearly_closed(&parse("exists x: (x in y)").unwrap()).unwrap();
        let c = nc.canonical();
        assert_eq!(c.free_vars(), set(&["x"]));
        assert!(c.alpha_eq(&parse("exists z: (z in x)").unwrap()));
    }

    #[test]
    fn substitute_examples() {
        let f = parse("not (x in x)").unwrap();
        assert_eq!(
            f.substitute("x", &constant("c")),
            Formula::not(Formula::mem(constant("c"), constant("c")))
        );
        let g = parse("forall y: (y in x)")
            .unwrap()
            .substitute("x", &var("y"));
        assert_eq!(g.free_vars(), set(&["y"]));
        assert!(g.alpha_eq(&parse("forall z: (z in y)").unwrap()));
        assert_eq!(Formula::Verum.substitute("x", &var("q")), Formula::Verum);
    }

    #[test]
    fn substitution_respects_set_builder_binders() {
        let f = parse("x in {y : y = x}").unwrap();
        let g = f.substitute("x", &var("y"));
        assert!(g.alpha_eq(&parse("y in {z : z = y}").unwrap()));
        let h = parse("x in {x : x = x}")
            .unwrap()
            .substitute("x", &var("q"));
        assert_eq!(h, parse("q in {x : x = x}").unwrap());
    }

    #[test]
    fn subformula_examples() {
        let subs = parse("not (x in x)").unwrap().subformulas();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[1].0, parse("x in x").unwrap());
        let subs = parse("(x in x) & Verum").unwrap().subformulas();
        assert_eq!(subs.len(), 3);
        assert_eq!(subs[2].0, Formula::Verum);
        let subs = parse("y in {x : not (x in x)}").unwrap().subformulas();
        assert!(subs
            .iter()
            .any(|(f, fv)| *f == parse("not (x in x)").unwrap() && *fv == set(&["x"])));
    }

    #[test]
    fn alpha_equivalence() {
        let a = parse("forall y: (y in x)").unwrap();
        let b = parse("forall z: (z in x)").unwrap();
        let c = parse("forall z: (z in w)").unwrap();
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
        assert!(!parse("forall y: forall z: (y in z)")
            .unwrap()
            .alpha_eq(&parse("forall y: forall z: (z in y)").unwrap()));
    }

    #[test]
    fn shadowing_is_detected() {
        let f = parse("forall y: exists y: (y in x)").unwrap();
        assert_eq!(f.shadowed_binders(), vec!["y".to_string()]);
    }

    #[test]
    fn rename_bound_avoiding_reserved_names() {
        let f = parse("exists c0: (x in c0)").unwrap();
        let g = f.rename_bound_avoiding(&set(&["c0"]));
        assert!(f.alpha_eq(&g));
        assert!(!g.identifiers().contains("c0"));
    }
}
