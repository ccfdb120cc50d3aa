//! Grounding of a theory over a fixed finite universe into clauses.
//!
//! Variables: one per membership cell and one per (constant, element)
//! denotation choice. Gates are hash-consed and constant-folded before their
//! defining clauses are emitted.

use rustc_hash::FxHashMap;

use super::model::ModelError;
use super::sat::{Lit, Solver};
use crate::formula::{Formula, Term};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum G {
    True,
    False,
    Lit(Lit),
}

impl std::ops::Not for G {
    type Output = G;
    fn not(self) -> G {
        match self {
            G::True => G::False,
            G::False => G::True,
            G::Lit(l) => G::Lit(!l),
        }
    }
}

#[derive(Clone, Copy)]
enum Value {
    Elem(usize),
    Const(usize),
}

pub struct Grounding {
    pub solver: Solver,
    pub size: usize,
    pub constants: Vec<String>,
    member: Vec<Lit>,
    denote: Vec<Lit>,
    ands: FxHashMap<Vec<Lit>, Lit>,
}

impl Grounding {
    pub fn new(size: usize, constants: Vec<String>) -> Grounding {
        let mut solver = Solver::new();
        let member = (0..size * size)
            .map(|_| Lit::new(solver.new_var(), true))
            .collect();
        let denote: Vec<Lit> = (0..constants.len() * size)
            .map(|_| Lit::new(solver.new_var(), true))
            .collect();
        let mut g = Grounding {
            solver,
            size,
            constants,
            member,
            denote,
            ands: FxHashMap::default(),
        };
        for c in 0..g.constants.len() {
            let row: Vec<Lit> = (0..size).map(|j| g.denote(c, j)).collect();
            g.solver.add_clause(&row);
            for a in 0..size {
                for b in a + 1..size {
                    g.solver.add_clause(&[!row[a], !row[b]]);
                }
            }
        }
        g
    }

    pub fn member(&self, i: usize, j: usize) -> Lit {
        self.member[i * self.size + j]
    }

    pub fn denote(&self, c: usize, j: usize) -> Lit {
        self.denote[c * self.size + j]
    }

    pub fn assert(&mut self, f: &Formula) -> Result<(), ModelError> {
        let g = self.ground(f, &mut Vec::new())?;
        match g {
            G::True => {}
            G::False => self.solver.add_clause(&[]),
            G::Lit(l) => self.solver.add_clause(&[l]),
        }
        Ok(())
    }

    fn and(&mut self, parts: Vec<G>) -> G {
        let mut lits = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                G::False => return G::False,
                G::True => {}
                G::Lit(l) => lits.push(l),
            }
        }
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return G::False;
        }
        match lits.len() {
            0 => G::True,
            1 => G::Lit(lits[0]),
            _ => {
                if let Some(&l) = self.ands.get(&lits) {
                    return G::Lit(l);
                }
                let out = Lit::new(self.solver.new_var(), true);
                for &l in &lits {
                    self.solver.add_clause(&[!out, l]);
                }
                let mut big: Vec<Lit> = lits.iter().map(|&l| !l).collect();
                big.push(out);
                self.solver.add_clause(&big);
                self.ands.insert(lits, out);
                G::Lit(out)
            }
        }
    }

    fn or(&mut self, parts: Vec<G>) -> G {
        let negated = parts.into_iter().map(|p| !p).collect();
        !self.and(negated)
    }

    fn value(&self, t: &Term, env: &[(String, usize)]) -> Result<Value, ModelError> {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|&(_, i)| Value::Elem(i))
                .ok_or_else(|| ModelError::UnboundVariable(v.clone())),
            Term::Const(c) => self
                .constants
                .iter()
                .position(|k| k == c)
                .map(Value::Const)
                .ok_or_else(|| ModelError::UnknownConstant(c.clone())),
            Term::App(f, _) => Err(ModelError::UnsupportedTerm(f.clone())),
            Term::SetAbs(..) => Err(ModelError::UnsupportedTerm("{...}".into())),
        }
    }

    /// Possible elements for a term value, each with its side condition.
    fn choices(&self, v: Value) -> Vec<(usize, G)> {
        match v {
            Value::Elem(i) => vec![(i, G::True)],
            Value::Const(c) => (0..self.size)
                .map(|j| (j, G::Lit(self.denote(c, j))))
                .collect(),
        }
    }

    fn ground(&mut self, f: &Formula, env: &mut Vec<(String, usize)>) -> Result<G, ModelError> {
        Ok(match f {
            Formula::Mem(s, t) | Formula::Eq(s, t) => {
                let is_mem = matches!(f, Formula::Mem(..));
                let (a, b) = (self.value(s, env)?, self.value(t, env)?);
                let mut cases = Vec::new();
                for (i, ci) in self.choices(a) {
                    for (j, cj) in self.choices(b) {
                        let atom = if is_mem {
                            G::Lit(self.member(i, j))
                        } else if i == j {
                            G::True
                        } else {
                            G::False
                        };
                        cases.push(self.and(vec![ci, cj, atom]));
                    }
                }
                self.or(cases)
            }
            Formula::Verum => G::True,
            Formula::Falsum => G::False,
            Formula::Not(a) => !self.ground(a, env)?,
            Formula::And(a, b) => {
                let parts = vec![self.ground(a, env)?, self.ground(b, env)?];
                self.and(parts)
            }
            Formula::Or(a, b) => {
                let parts = vec![self.ground(a, env)?, self.ground(b, env)?];
                self.or(parts)
            }
            Formula::Implies(a, b) => {
                let parts = vec![!self.ground(a, env)?, self.ground(b, env)?];
                self.or(parts)
            }
            Formula::Iff(a, b) => {
                let (x, y) = (self.ground(a, env)?, self.ground(b, env)?);
                let both = self.and(vec![x, y]);
                let neither = self.and(vec![!x, !y]);
                self.or(vec![both, neither])
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let mut parts = Vec::with_capacity(self.size);
                for i in 0..self.size {
                    env.push((v.clone(), i));
                    let g = self.ground(a, env);
                    env.pop();
                    parts.push(g?);
                }
                if matches!(f, Formula::Forall(..)) {
                    self.and(parts)
                } else {
                    self.or(parts)
                }
            }
        })
    }
}
