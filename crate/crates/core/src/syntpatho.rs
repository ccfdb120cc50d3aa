//! Syntactic pathology: the circularity formulas
//!
//! ```text
//! NC_1 = not (x in x)
//! NC_n = not exists a1: ... exists a(n-1): (x in a1 & a1 in a2 & ... & a(n-1) in x)
//! ```
//!
//! (`n` counts the membership links of the forbidden cycle) and their
//! derivatives, obtained by decorating chain atoms with `& not B` or `| B`.
//! Every nearly-closed formula that contains such a pattern, possibly as a
//! subformula, is syntactically pathological; the rest are syntactically
//! hereditary-non-pathological.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::formula::{var, Formula, NearlyClosed, Term, CANONICAL_VAR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InsertionKind {
    AndNotB,
    OrB,
}

/// Where a decoration was attached: a chain atom (by its position in the
/// formula, left to right) or the whole quantified body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Site {
    Atom(usize),
    Body,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertion {
    pub site: Site,
    pub kind: InsertionKind,
    pub inserted: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcnMatch {
    /// Length of the membership cycle through `x`.
    pub n: usize,
    /// The existentially bound chain variables, in cycle order starting after `x`.
    pub chain_vars: Vec<String>,
    pub insertions: Vec<Insertion>,
}

impl NcnMatch {
    pub fn is_pure(&self) -> bool {
        self.insertions.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntVerdict {
    SyntP {
        matched: NcnMatch,
        /// The matching subformula, renamed so its free variable is `x`.
        subformula: Formula,
        /// Pre-order position of the subformula (0 is the whole formula).
        position: usize,
    },
    SyntHnP,
}

impl SyntVerdict {
    pub fn is_synt_p(&self) -> bool {
        matches!(self, SyntVerdict::SyntP { .. })
    }

    pub fn summary(&self) -> SyntSummary {
        match self {
            SyntVerdict::SyntP {
                matched,
                subformula,
                position,
            } => SyntSummary {
                verdict: "SyntP",
                n: Some(matched.n),
                pure: Some(matched.is_pure()),
                position: Some(*position),
                subformula: Some(subformula.to_string()),
                insertions: matched
                    .insertions
                    .iter()
                    .map(|i| {
                        let site = match i.site {
                            Site::Atom(k) => format!("atom {k}"),
                            Site::Body => "body".to_string(),
                        };
                        format!("{:?} at {site}: {}", i.kind, i.inserted)
                    })
                    .collect(),
            },
            SyntVerdict::SyntHnP => SyntSummary {
                verdict: "SyntHnP",
                n: None,
                pure: None,
                position: None,
                subformula: None,
                insertions: Vec::new(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyntSummary {
    pub verdict: &'static str,
    pub n: Option<usize>,
    pub pure: Option<bool>,
    pub position: Option<usize>,
    pub subformula: Option<String>,
    pub insertions: Vec<String>,
}

/// `NC_n` built with chain variables `a1 .. a(n-1)`.
pub fn ncn(n: usize) -> Formula {
    assert!(n >= 1, "NC_n needs n >= 1");
    if n == 1 {
        return Formula::not(Formula::mem(var(CANONICAL_VAR), var(CANONICAL_VAR)));
    }
    let names: Vec<String> = (1..n).map(|i| format!("a{i}")).collect();
    let mut chain = vec![CANONICAL_VAR.to_string()];
    chain.extend(names.iter().cloned());
    chain.push(CANONICAL_VAR.to_string());
    let atoms = chain
        .windows(2)
        .map(|w| Formula::mem(var(&w[0]), var(&w[1])))
        .collect();
    let body = names
        .iter()
        .rev()
        .fold(Formula::and_all(atoms), |acc, v| Formula::exists(v, acc));
    Formula::not(body)
}

/// Match a pure circularity formula (no decorations). `f` must use `x` as
/// its free variable.
pub fn match_ncn(f: &Formula) -> Option<NcnMatch> {
    match_derivative(f).filter(NcnMatch::is_pure)
}

/// Match a circularity formula whose chain atoms may carry one decoration
/// each and whose quantified body may carry one more.
pub fn match_derivative(f: &Formula) -> Option<NcnMatch> {
    let Formula::Not(inner) = f else { return None };
    let mut prefix = Vec::new();
    let mut body: &Formula = inner;
    while let Formula::Exists(v, b) = body {
        prefix.push(v.clone());
        body = b;
    }
    if prefix.iter().any(|v| v == CANONICAL_VAR) {
        return None;
    }
    for (i, v) in prefix.iter().enumerate() {
        if prefix[i + 1..].contains(v) {
            return None;
        }
    }

    if let Some(m) = match_chain(body, &prefix) {
        return Some(m);
    }
    let (rest, kind, inserted) = match body {
        Formula::And(l, r) => match &**r {
            Formula::Not(b) => (&**l, InsertionKind::AndNotB, (**b).clone()),
            _ => return None,
        },
        Formula::Or(l, r) => (&**l, InsertionKind::OrB, (**r).clone()),
        _ => return None,
    };
    let mut m = match_chain(rest, &prefix)?;
    m.insertions.push(Insertion {
        site: Site::Body,
        kind,
        inserted,
    });
    Some(m)
}

struct Leaf<'a> {
    from: &'a str,
    to: &'a str,
    decoration: Option<(InsertionKind, Formula)>,
}

fn var_name(t: &Term) -> Option<&str> {
    match t {
        Term::Var(n) => Some(n),
        _ => None,
    }
}

fn membership_leaf(f: &Formula) -> Option<(&str, &str)> {
    match f {
        Formula::Mem(s, t) => Some((var_name(s)?, var_name(t)?)),
        _ => None,
    }
}

fn collect_leaves<'a>(f: &'a Formula, out: &mut Vec<Leaf<'a>>) -> bool {
    if let Some((from, to)) = membership_leaf(f) {
        out.push(Leaf {
            from,
            to,
            decoration: None,
        });
        return true;
    }
    match f {
        Formula::And(l, r) => {
            if let (Some((from, to)), Formula::Not(b)) = (membership_leaf(l), &**r) {
                out.push(Leaf {
                    from,
                    to,
                    decoration: Some((InsertionKind::AndNotB, (**b).clone())),
                });
                return true;
            }
            collect_leaves(l, out) && collect_leaves(r, out)
        }
        Formula::Or(l, r) => match membership_leaf(l) {
            Some((from, to)) => {
                out.push(Leaf {
                    from,
                    to,
                    decoration: Some((InsertionKind::OrB, (**r).clone())),
                });
                true
            }
            None => false,
        },
        _ => false,
    }
}

fn match_chain(body: &Formula, prefix: &[String]) -> Option<NcnMatch> {
    let mut leaves = Vec::new();
    if !collect_leaves(body, &mut leaves) {
        return None;
    }
    let n = leaves.len();
    if n != prefix.len() + 1 {
        return None;
    }
    let known = |v: &str| v == CANONICAL_VAR || prefix.iter().any(|p| p == v);
    let mut succ: BTreeMap<&str, &str> = BTreeMap::new();
    for leaf in &leaves {
        if !known(leaf.from) || !known(leaf.to) || succ.insert(leaf.from, leaf.to).is_some() {
            return None;
        }
    }
    // follow the links from x; a single cycle visits every variable once
    let mut chain_vars = Vec::new();
    let mut at = CANONICAL_VAR;
    for step in 0..n {
        at = succ.get(at)?;
        if step + 1 < n {
            if at == CANONICAL_VAR || chain_vars.iter().any(|v: &String| v == at) {
                return None;
            }
            chain_vars.push(at.to_string());
        }
    }
    if at != CANONICAL_VAR {
        return None;
    }
    let insertions = leaves
        .into_iter()
        .enumerate()
        .filter_map(|(i, leaf)| {
            leaf.decoration.map(|(kind, inserted)| Insertion {
                site: Site::Atom(i),
                kind,
                inserted,
            })
        })
        .collect();
    Some(NcnMatch {
        n,
        chain_vars,
        insertions,
    })
}

/// SyntP if the formula or any subformula with exactly one free variable
/// (renamed to `x`) matches a circularity derivative.
pub fn synt_classify(a: &NearlyClosed) -> SyntVerdict {
    let whole = a.canonical();
    for (position, (sub, free)) in whole.subformulas().into_iter().enumerate() {
        if free.len() != 1 {
            continue;
        }
        let v = free.into_iter().next().expect("one free variable");
        let canonical = if v == CANONICAL_VAR {
            sub
        } else {
            sub.substitute(&v, &var(CANONICAL_VAR))
        };
        if let Some(matched) = match_derivative(&canonical) {
            return SyntVerdict::SyntP {
                matched,
                subformula: canonical,
                position,
            };
        }
    }
    SyntVerdict::SyntHnP
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::nearly_closed;
    use crate::parser::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn classify(s: &str) -> SyntVerdict {
        synt_classify(&nearly_closed(&p(s)).unwrap())
    }

    #[test]
    fn ncn_examples() {
        let m = match_ncn(&p("not (x in x)")).unwrap();
        assert_eq!((m.n, m.chain_vars.len()), (1, 0));
        let m = match_ncn(&p("not exists a: ((x in a) & (a in x))")).unwrap();
        assert_eq!(m.n, 2);
        assert_eq!(m.chain_vars, vec!["a".to_string()]);
        assert!(match_ncn(&p("x in x")).is_none());
    }

    #[test]
    fn built_ncn_round_trips_through_the_matcher() {
        for n in 1..=6 {
            let m = match_ncn(&ncn(n)).unwrap();
            assert_eq!(m.n, n);
        }
    }

    #[test]
    fn reassociated_and_rotated_chains_match() {
        let f = p("not exists b: exists a: ((x in a) & ((a in b) & (b in x)))");
        assert_eq!(match_ncn(&f).unwrap().n, 3);
        let g = p("not exists a: exists b: ((b in x) & (x in a) & (a in b))");
        assert_eq!(
            match_ncn(&g).unwrap().chain_vars,
            vec!["a".to_string(), "b".to_string()]
        );
    }

    #[test]
    fn broken_chains_do_not_match() {
        for s in [
            "not exists a: ((x in a) & (x in a))",
            "not exists a: exists b: ((x in a) & (a in x))",
            "not exists a: ((x in a) & (a in a))",
            "not exists x: ((x in x) & (x in x))",
            "not exists a: exists a: ((x in a) & (a in x))",
            "not exists a: ((x in a) | (a in x))",
        ] {
            assert!(match_derivative(&p(s)).is_none(), "{s}");
        }
    }

    #[test]
    fn derivative_examples() {
        let f = p("not (x in x & not (Verum))");
        assert!(match_ncn(&f).is_none());
        let m = match_derivative(&f).unwrap();
        assert_eq!(m.n, 1);
        assert_eq!(
            m.insertions,
            vec![Insertion {
                site: Site::Atom(0),
                kind: InsertionKind::AndNotB,
                inserted: Formula::Verum
            }]
        );

        let m = match_derivative(&p("not exists a: (((x in a) | Falsum) & (a in x))")).unwrap();
        assert_eq!(m.n, 2);
        assert_eq!(m.insertions[0].site, Site::Atom(0));
        assert_eq!(m.insertions[0].kind, InsertionKind::OrB);

        assert!(match_derivative(&p("forall y: (y in x)")).is_none());
    }

    #[test]
    fn body_level_decorations() {
        let m =
            match_derivative(&p("not exists a: (((x in a) & (a in x)) & not (a = a))")).unwrap();
        assert_eq!(m.insertions.len(), 1);
        assert_eq!(m.insertions[0].site, Site::Body);
        let m = match_derivative(&p("not exists a: (((x in a) & (a in x)) | (x = a))")).unwrap();
        assert_eq!(m.insertions[0].kind, InsertionKind::OrB);
        assert_eq!(m.insertions[0].site, Site::Body);
        // atom decorations and a body decoration together
        let m = match_derivative(&p(
            "not exists a: ((((x in a) | Verum) & (a in x)) | Falsum)",
        ))
        .unwrap();
        assert_eq!(m.insertions.len(), 2);
    }

    #[test]
    fn classify_examples() {
        assert!(classify("not (x in x)").is_synt_p());
        assert_eq!(classify("Verum & (x = x)"), SyntVerdict::SyntHnP);
        match classify("(x = x) & not (x in x)") {
            SyntVerdict::SyntP {
                position, matched, ..
            } => {
                assert_eq!(position, 2);
                assert_eq!(matched.n, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn subformulas_are_renamed_before_matching() {
        match classify("exists y: ((y in x) & not (y in y))") {
            SyntVerdict::SyntP { subformula, .. } => assert_eq!(subformula, p("not (x in x)")),
            other => panic!("{other:?}"),
        }
        assert!(classify("y in {z : not (z in z)}").is_synt_p());
    }

    #[test]
    fn classification_ignores_bound_names() {
        let a = classify("not exists q: ((y in q) & (q in y))");
        let b = classify("not exists r: ((y in r) & (r in y))");
        assert_eq!(a.is_synt_p(), b.is_synt_p());
        assert!(a.is_synt_p());
    }
}
