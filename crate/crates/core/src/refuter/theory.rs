//! The comprehension theory of a candidate predicate: one comprehension
//! instance per set-builder term, extensionality and the equality axioms.

use std::collections::BTreeSet;

use crate::formula::{fresh_name, var, Formula, NearlyClosed, Term, CANONICAL_VAR};

/// A set-builder term replaced by a constant (or, when the term has free
/// parameters, by a function symbol applied to them).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsConstant {
    pub name: String,
    pub params: Vec<String>,
    pub bound: String,
    /// Body with nested set-builders already replaced.
    pub body: Formula,
}

impl AbsConstant {
    pub fn term(&self) -> Term {
        if self.params.is_empty() {
            Term::Const(self.name.clone())
        } else {
            Term::App(
                self.name.clone(),
                self.params.iter().map(|p| var(p)).collect(),
            )
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomClass {
    Comprehension,
    Extensionality,
    Equality,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub sentences: Vec<Formula>,
    pub classes: Vec<AxiomClass>,
    pub constants: Vec<AbsConstant>,
    /// Function symbols with arities, set-builder functions included.
    pub functions: Vec<(String, usize)>,
}

impl Theory {
    pub fn new(sentences: Vec<Formula>, classes: Vec<AxiomClass>) -> Theory {
        assert_eq!(sentences.len(), classes.len());
        let mut functions = BTreeSet::new();
        for s in &sentences {
            functions.extend(s.function_symbols());
        }
        Theory {
            sentences,
            classes,
            constants: Vec::new(),
            functions: functions.into_iter().collect(),
        }
    }

    pub fn constant(&self, name: &str) -> Option<&AbsConstant> {
        self.constants.iter().find(|c| c.name == name)
    }

    /// The constant standing for `{x : A}` itself.
    pub fn top_constant(&self) -> &AbsConstant {
        &self.constants[0]
    }

    /// Every identifier used by a sentence.
    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for s in &self.sentences {
            out.extend(s.identifiers());
        }
        out
    }

    pub fn has_function_symbols(&self) -> bool {
        !self.functions.is_empty()
    }

    pub fn is_core(&self, i: usize) -> bool {
        self.classes[i] == AxiomClass::Comprehension
    }
}

fn collect_abs_formula<'a>(f: &'a Formula, out: &mut Vec<&'a Term>) {
    match f {
        Formula::Mem(s, t) | Formula::Eq(s, t) => {
            collect_abs_term(s, out);
            collect_abs_term(t, out);
        }
        Formula::Verum | Formula::Falsum => {}
        Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => {
            collect_abs_formula(a, out)
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_abs_formula(a, out);
            collect_abs_formula(b, out);
        }
    }
}

fn collect_abs_term<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    match t {
        Term::Var(_) | Term::Const(_) => {}
        Term::SetAbs(_, body) => {
            out.push(t);
            collect_abs_formula(body, out);
        }
        Term::App(_, args) => args.iter().for_each(|a| collect_abs_term(a, out)),
    }
}

struct Abstractions<'a> {
    terms: Vec<&'a Term>,
    names: Vec<String>,
}

impl Abstractions<'_> {
    fn index_of(&self, t: &Term) -> usize {
        self.terms
            .iter()
            .position(|s| s.alpha_eq(t))
            .expect("collected set-builder")
    }

    fn replace_formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::Mem(s, t) => Formula::Mem(self.replace_term(s), self.replace_term(t)),
            Formula::Eq(s, t) => Formula::Eq(self.replace_term(s), self.replace_term(t)),
            Formula::Verum | Formula::Falsum => f.clone(),
            Formula::Not(a) => Formula::not(self.replace_formula(a)),
            Formula::And(a, b) => Formula::and(self.replace_formula(a), self.replace_formula(b)),
            Formula::Or(a, b) => Formula::or(self.replace_formula(a), self.replace_formula(b)),
            Formula::Implies(a, b) => {
                Formula::implies(self.replace_formula(a), self.replace_formula(b))
            }
            Formula::Iff(a, b) => Formula::iff(self.replace_formula(a), self.replace_formula(b)),
            Formula::Forall(v, a) => Formula::forall(v, self.replace_formula(a)),
            Formula::Exists(v, a) => Formula::exists(v, self.replace_formula(a)),
        }
    }

    fn replace_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) | Term::Const(_) => t.clone(),
            Term::SetAbs(..) => {
                let name = self.names[self.index_of(t)].clone();
                let params: Vec<Term> = t.free_vars().iter().map(|p| var(p)).collect();
                if params.is_empty() {
                    Term::Const(name)
                } else {
                    Term::App(name, params)
                }
            }
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| self.replace_term(a)).collect(),
            ),
        }
    }
}

/// `{x : A}` followed by the nested set-builders of `A` in pre-order,
/// alpha-equivalent duplicates removed.
fn distinct_abstractions(a: &Formula) -> Vec<Term> {
    let top = Term::SetAbs(CANONICAL_VAR.to_string(), Box::new(a.clone()));
    let mut terms = Vec::new();
    collect_abs_formula(a, &mut terms);
    let mut distinct = vec![top.clone()];
    for t in terms {
        if !distinct.iter().any(|s| s.alpha_eq(t)) {
            distinct.push(t.clone());
        }
    }
    distinct
}

fn forall_all(vars: &[String], body: Formula) -> Formula {
    vars.iter()
        .rev()
        .fold(body, |acc, v| Formula::forall(v, acc))
}

/// Build the theory for `{x : A}`. Constant `c0` names the top-level
/// abstraction; nested set-builders get `c1`, `c2`, ... in pre-order, with
/// alpha-equivalent copies sharing a constant.
pub fn build_cosi_theory(a: &NearlyClosed) -> Theory {
    let raw = a.canonical();
    let user_functions: BTreeSet<String> =
        raw.function_symbols().into_iter().map(|(f, _)| f).collect();

    let count = distinct_abstractions(&raw).len();
    let mut names = Vec::new();
    let mut k = 0usize;
    while names.len() < count {
        let name = format!("c{k}");
        k += 1;
        if !user_functions.contains(&name) {
            names.push(name);
        }
    }
    // bound variables may not shadow the new constants
    let reserved: BTreeSet<String> = names.iter().cloned().collect();
    let renamed = raw.rename_bound_avoiding(&reserved);
    let distinct = distinct_abstractions(&renamed);
    let abs = Abstractions {
        terms: distinct.iter().collect(),
        names,
    };

    let mut sentences = Vec::new();
    let mut classes = Vec::new();
    let mut constants = Vec::new();
    for (i, t) in abs.terms.iter().enumerate() {
        let Term::SetAbs(v, body) = t else {
            unreachable!()
        };
        let params: Vec<String> = t.free_vars().into_iter().collect();
        let body = abs.replace_formula(body);
        let mut avoid = body.identifiers();
        avoid.extend(params.iter().cloned());
        avoid.extend(reserved.iter().cloned());
        avoid.remove(v.as_str());
        let y = if avoid.contains("y") {
            fresh_name("y", &avoid)
        } else {
            "y".to_string()
        };
        let c = AbsConstant {
            name: abs.names[i].clone(),
            params: params.clone(),
            bound: v.clone(),
            body,
        };
        let instance = Formula::iff(
            Formula::mem(var(&y), c.term()),
            c.body.substitute(v, &var(&y)),
        );
        sentences.push(forall_all(&params, Formula::forall(&y, instance)));
        classes.push(AxiomClass::Comprehension);
        constants.push(c);
    }

    let (u, v, w, z) = (var("u"), var("v"), var("w"), var("z"));
    let ext = Formula::forall(
        "u",
        Formula::forall(
            "v",
            Formula::implies(
                Formula::forall(
                    "z",
                    Formula::iff(
                        Formula::mem(z.clone(), u.clone()),
                        Formula::mem(z, v.clone()),
                    ),
                ),
                Formula::eq(u.clone(), v.clone()),
            ),
        ),
    );
    sentences.push(ext);
    classes.push(AxiomClass::Extensionality);

    let uvw = |body: Formula| forall_all(&["u".into(), "v".into(), "w".into()], body);
    let eq_uv = Formula::eq(u.clone(), v.clone());
    let equality = [
        Formula::forall("u", Formula::eq(u.clone(), u.clone())),
        uvw(Formula::implies(
            eq_uv.clone(),
            Formula::implies(
                Formula::eq(u.clone(), w.clone()),
                Formula::eq(v.clone(), w.clone()),
            ),
        )),
        uvw(Formula::implies(
            eq_uv.clone(),
            Formula::implies(
                Formula::mem(u.clone(), w.clone()),
                Formula::mem(v.clone(), w.clone()),
            ),
        )),
        uvw(Formula::implies(
            eq_uv.clone(),
            Formula::implies(
                Formula::mem(w.clone(), u.clone()),
                Formula::mem(w.clone(), v.clone()),
            ),
        )),
    ];
    for s in equality {
        sentences.push(s);
        classes.push(AxiomClass::Equality);
    }

    let mut functions = BTreeSet::new();
    for s in &sentences {
        functions.extend(s.function_symbols());
    }
    for (f, arity) in &functions {
        for pos in 0..*arity {
            let others: Vec<String> = (1..*arity).map(|i| format!("z{i}")).collect();
            let args = |at: &Term| {
                let mut rest = others.iter();
                (0..*arity)
                    .map(|i| {
                        if i == pos {
                            at.clone()
                        } else {
                            var(rest.next().expect("arity"))
                        }
                    })
                    .collect::<Vec<_>>()
            };
            let body = Formula::implies(
                eq_uv.clone(),
                Formula::eq(
                    Term::App(f.clone(), args(&u)),
                    Term::App(f.clone(), args(&v)),
                ),
            );
            let mut vars = vec!["u".to_string(), "v".to_string()];
            vars.extend(others.iter().cloned());
            sentences.push(forall_all(&vars, body));
            classes.push(AxiomClass::Equality);
        }
    }

    Theory {
        sentences,
        classes,
        constants,
        functions: functions.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{nearly_closed, wrap_closed};
    use crate::parser::{parse, parse_sentence};

    fn theory(s: &str) -> Theory {
        build_cosi_theory(&nearly_closed(&parse(s).unwrap()).unwrap())
    }

    #[test]
    fn russell_instance() {
        let t = theory("not (x in x)");
        assert_eq!(
            t.sentences[0],
            parse_sentence("forall y: (y in c0 <-> not (y in y))").unwrap()
        );
        assert_eq!(
            t.sentences[1],
            parse_sentence("forall u: forall v: ((forall z: ((z in u) <-> (z in v))) -> u = v)")
                .unwrap()
        );
        assert!(t.sentences.iter().all(|s| s.free_vars().is_empty()));
        assert_eq!(t.constants.len(), 1);
        assert!(t.functions.is_empty());
    }

    #[test]
    fn verum_wrapped_instance() {
        let f = wrap_closed(&Formula::Verum);
        let t = build_cosi_theory(&nearly_closed(&f).unwrap());
        assert_eq!(
            t.sentences[0],
            parse_sentence("forall y: (y in c0 <-> Verum & (y = y))").unwrap()
        );
    }

    #[test]
    fn nested_set_builders_get_constants_in_pre_order() {
        let t = theory("x in {z : z = z} & x in {w : {q : q in q} in w}");
        let names: Vec<&str> = t.constants.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["c0", "c1", "c2", "c3"]);
        assert_eq!(
            t.sentences[1],
            parse_sentence("forall y: (y in c1 <-> y = y)").unwrap()
        );
        assert_eq!(
            t.sentences[2],
            parse_sentence("forall y: (y in c2 <-> c3 in y)").unwrap()
        );
        assert_eq!(
            t.sentences[0],
            parse_sentence("forall y: (y in c0 <-> (y in c1) & (y in c2))").unwrap()
        );
    }

    #[test]
    fn alpha_equivalent_set_builders_share_a_constant() {
        let t = theory("x in {z : z = z} | x = {w : w = w}");
        assert_eq!(t.constants.len(), 2);
    }

    #[test]
    fn parameterised_set_builder_becomes_a_function() {
        let t = theory("exists a: (a in {z : z in a} & x = a)");
        assert_eq!(t.constants[1].params, vec!["a".to_string()]);
        assert_eq!(t.functions, vec![("c1".to_string(), 1)]);
        assert_eq!(
            t.sentences[1],
            parse_sentence("forall a: forall y: (y in c1(a) <-> y in a)").unwrap()
        );
        assert!(t
            .sentences
            .last()
            .unwrap()
            .to_string()
            .contains("c1(u) = c1(v)"));
    }

    #[test]
    fn clashing_names_are_renamed() {
        let t = theory("exists c0: (c0 in x) & exists y: (x in y)");
        for s in &t.sentences {
            assert!(s.free_vars().is_empty(), "{s}");
        }
        let body = &t.constants[0].body;
        assert!(!body.identifiers().contains("c0"));
        assert_eq!(
            t.sentences[0].constants(),
            BTreeSet::from(["c0".to_string()])
        );
    }
}
