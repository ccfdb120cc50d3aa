#![allow(dead_code)]

use std::collections::BTreeMap;

use patholab_core::formula::{Formula, Term};
use patholab_core::refuter::Theory;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: &[&str] = &["x", "y", "z", "w", "u", "v", "a", "b"];
const FUNCS: &[&str] = &["f", "g"];

fn any_term(r: &mut ChaCha8Rng, depth: usize) -> Term {
    let roll = if depth == 0 { 0 } else { r.gen_range(0..10) };
    match roll {
        0..=6 => Term::Var(NAMES.choose(r).unwrap().to_string()),
        7 | 8 => {
            let v = NAMES.choose(r).unwrap().to_string();
            Term::SetAbs(v, Box::new(any_formula(r, depth - 1)))
        }
        _ => {
            let f = FUNCS.choose(r).unwrap().to_string();
            let n = r.gen_range(1..=2);
            Term::App(f, (0..n).map(|_| any_term(r, depth - 1)).collect())
        }
    }
}

/// An arbitrary formula of tree depth at most `depth + 1`: free and bound
/// names drawn from a small pool, shadowing, set-builders and function terms.
pub fn any_formula(r: &mut ChaCha8Rng, depth: usize) -> Formula {
    let roll = if depth == 0 {
        r.gen_range(0..3)
    } else {
        r.gen_range(0..11)
    };
    let sub = |r: &mut ChaCha8Rng| Box::new(any_formula(r, depth - 1));
    match roll {
        0 => Formula::Mem(any_term(r, depth), any_term(r, depth)),
        1 => Formula::Eq(any_term(r, depth), any_term(r, depth)),
        2 => {
            if r.gen_bool(0.5) {
                Formula::Verum
            } else {
                Formula::Falsum
            }
        }
        3 => Formula::Not(sub(r)),
        4 => Formula::And(sub(r), sub(r)),
        5 => Formula::Or(sub(r), sub(r)),
        6 => Formula::Implies(sub(r), sub(r)),
        7 => Formula::Iff(sub(r), sub(r)),
        8 | 9 => Formula::Forall(NAMES.choose(r).unwrap().to_string(), sub(r)),
        _ => Formula::Exists(NAMES.choose(r).unwrap().to_string(), sub(r)),
    }
}

/// Two level expressions (class, offset) that must differ by the gap.
type LevelAtom = ((usize, i64), (usize, i64), i64);

/// Membership matrix and denotations.
pub type RawModel = (Vec<Vec<bool>>, BTreeMap<String, usize>);

const BOUND: &[&str] = &["y", "z", "w"];

fn scoped_term(r: &mut ChaCha8Rng, depth: usize, scope: &mut Vec<String>) -> Term {
    if depth > 0 && r.gen_bool(0.12) {
        let v = BOUND.choose(r).unwrap().to_string();
        scope.push(v.clone());
        let body = scoped_formula(r, depth - 1, scope);
        scope.pop();
        return Term::SetAbs(v, Box::new(body));
    }
    if scope.is_empty() || r.gen_bool(0.4) {
        Term::Var("x".into())
    } else {
        Term::Var(scope.choose(r).unwrap().clone())
    }
}

fn scoped_formula(r: &mut ChaCha8Rng, depth: usize, scope: &mut Vec<String>) -> Formula {
    let roll = if depth <= 1 {
        r.gen_range(0..10)
    } else {
        r.gen_range(0..22)
    };
    let d = depth.saturating_sub(1);
    match roll {
        0..=5 => Formula::Mem(scoped_term(r, d, scope), scoped_term(r, d, scope)),
        6..=8 => Formula::Eq(scoped_term(r, d, scope), scoped_term(r, d, scope)),
        9 => {
            if r.gen_bool(0.5) {
                Formula::Verum
            } else {
                Formula::Falsum
            }
        }
        10..=12 => Formula::Not(Box::new(scoped_formula(r, d, scope))),
        13..=14 => Formula::And(
            Box::new(scoped_formula(r, d, scope)),
            Box::new(scoped_formula(r, d, scope)),
        ),
        15..=16 => Formula::Or(
            Box::new(scoped_formula(r, d, scope)),
            Box::new(scoped_formula(r, d, scope)),
        ),
        17 => Formula::Implies(
            Box::new(scoped_formula(r, d, scope)),
            Box::new(scoped_formula(r, d, scope)),
        ),
        18 => Formula::Iff(
            Box::new(scoped_formula(r, d, scope)),
            Box::new(scoped_formula(r, d, scope)),
        ),
        _ => {
            let v = BOUND.choose(r).unwrap().to_string();
            scope.push(v.clone());
            let body = Box::new(scoped_formula(r, d, scope));
            scope.pop();
            if roll == 19 {
                Formula::Forall(v, body)
            } else {
                Formula::Exists(v, body)
            }
        }
    }
}

/// A formula of depth at most `depth` whose only free variable is `x`,
/// without function symbols.
pub fn nearly_closed_formula(r: &mut ChaCha8Rng, depth: usize) -> Formula {
    loop {
        let f = scoped_formula(r, depth, &mut Vec::new());
        if f.free_vars().len() == 1 && f.depth() <= depth {
            return f;
        }
    }
}

/// `count` distinct fuzz formulas from a fixed seed.
pub fn fuzz_set(seed: u64, count: usize, depth: usize) -> Vec<Formula> {
    let mut r = rng(seed);
    let mut out: Vec<Formula> = Vec::new();
    while out.len() < count {
        let f = nearly_closed_formula(&mut r, depth);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Level expression of a term: a variable class plus an offset.
fn term_level(
    t: &Term,
    scope: &[(String, usize)],
    free: &mut BTreeMap<String, usize>,
    classes: &mut usize,
    atoms: &mut Vec<LevelAtom>,
) -> (usize, i64) {
    match t {
        Term::Var(n) => match scope.iter().rev().find(|(m, _)| m == n) {
            Some((_, id)) => (*id, 0),
            None => {
                let next = *classes;
                let id = *free.entry(n.clone()).or_insert(next);
                if id == next {
                    *classes += 1;
                }
                (id, 0)
            }
        },
        Term::SetAbs(v, body) => {
            let id = *classes;
            *classes += 1;
            let mut inner = scope.to_vec();
            inner.push((v.clone(), id));
            collect(body, &inner, free, classes, atoms);
            (id, 1)
        }
        Term::Const(_) | Term::App(..) => panic!("oracle handles variables and set-builders only"),
    }
}

fn collect(
    f: &Formula,
    scope: &[(String, usize)],
    free: &mut BTreeMap<String, usize>,
    classes: &mut usize,
    atoms: &mut Vec<LevelAtom>,
) {
    match f {
        Formula::Mem(s, t) | Formula::Eq(s, t) => {
            let a = term_level(s, scope, free, classes, atoms);
            let b = term_level(t, scope, free, classes, atoms);
            let gap = if matches!(f, Formula::Mem(..)) { 1 } else { 0 };
            atoms.push((a, b, gap));
        }
        Formula::Verum | Formula::Falsum => {}
        Formula::Not(g) => collect(g, scope, free, classes, atoms),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect(a, scope, free, classes, atoms);
            collect(b, scope, free, classes, atoms);
        }
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let id = *classes;
            *classes += 1;
            let mut inner = scope.to_vec();
            inner.push((v.clone(), id));
            collect(g, &inner, free, classes, atoms);
        }
    }
}

/// Variable classes of the formula: one per free name and one per binder.
pub fn variable_count(f: &Formula) -> usize {
    let (mut free, mut classes, mut atoms) = (BTreeMap::new(), 0, Vec::new());
    collect(f, &[], &mut free, &mut classes, &mut atoms);
    classes
}

/// Exhaustive search for levels in `[lo, hi]` for every variable class with
/// `level(t) = level(s) + 1` for `s in t` and equal levels for `s = t`.
pub fn brute_stratifiable(f: &Formula, lo: i64, hi: i64) -> bool {
    let (mut free, mut k, mut atoms) = (BTreeMap::new(), 0, Vec::new());
    collect(f, &[], &mut free, &mut k, &mut atoms);
    let mut levels = vec![lo; k];
    loop {
        let ok = atoms
            .iter()
            .all(|&((a, da), (b, db), gap)| levels[b] + db == levels[a] + da + gap);
        if ok {
            return true;
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            if levels[i] < hi {
                levels[i] += 1;
                break;
            }
            levels[i] = lo;
            i += 1;
        }
    }
}

/// Independent evaluation of a sentence over `member[i][j]` (i in j) with
/// `=` as identity. Sentences must mention only constants and variables.
pub fn holds(member: &[Vec<bool>], den: &BTreeMap<String, usize>, f: &Formula) -> bool {
    fn term(t: &Term, den: &BTreeMap<String, usize>, env: &[(String, usize)]) -> usize {
        match t {
            Term::Var(v) => {
                env.iter()
                    .rev()
                    .find(|(n, _)| n == v)
                    .expect("bound variable")
                    .1
            }
            Term::Const(c) => den[c],
            _ => panic!("unexpected term in a theory sentence"),
        }
    }
    fn go(
        m: &[Vec<bool>],
        den: &BTreeMap<String, usize>,
        f: &Formula,
        env: &mut Vec<(String, usize)>,
    ) -> bool {
        match f {
            Formula::Mem(s, t) => m[term(s, den, env)][term(t, den, env)],
            Formula::Eq(s, t) => term(s, den, env) == term(t, den, env),
            Formula::Verum => true,
            Formula::Falsum => false,
            Formula::Not(g) => !go(m, den, g, env),
            Formula::And(a, b) => go(m, den, a, env) && go(m, den, b, env),
            Formula::Or(a, b) => go(m, den, a, env) || go(m, den, b, env),
            Formula::Implies(a, b) => !go(m, den, a, env) || go(m, den, b, env),
            Formula::Iff(a, b) => go(m, den, a, env) == go(m, den, b, env),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let universal = matches!(f, Formula::Forall(..));
                for i in 0..m.len() {
                    env.push((v.clone(), i));
                    let r = go(m, den, g, env);
                    env.pop();
                    if r != universal {
                        return !universal;
                    }
                }
                universal
            }
        }
    }
    go(member, den, f, &mut Vec::new())
}

/// First model of the theory by exhaustive enumeration: smallest size, then
/// membership matrices in row-major order with 1 before 0, then the smallest
/// denotation of each constant in turn.
pub fn brute_first_model(theory: &Theory, max_size: usize) -> Option<RawModel> {
    let names: Vec<&str> = theory.constants.iter().map(|c| c.name.as_str()).collect();
    for n in 1..=max_size {
        let cells = n * n;
        for code in (0..1u64 << cells).rev() {
            let member: Vec<Vec<bool>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| code >> (cells - 1 - (i * n + j)) & 1 == 1)
                        .collect()
                })
                .collect();
            let tuples = (0..names.len()).fold(vec![Vec::new()], |acc, _| {
                acc.into_iter()
                    .flat_map(|t: Vec<usize>| (0..n).map(move |j| [t.clone(), vec![j]].concat()))
                    .collect()
            });
            for tuple in tuples {
                let den: BTreeMap<String, usize> =
                    names.iter().map(|s| s.to_string()).zip(tuple).collect();
                if theory.sentences.iter().all(|s| holds(&member, &den, s)) {
                    return Some((member, den));
                }
            }
        }
    }
    None
}
