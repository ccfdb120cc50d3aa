//! Stratification: integer levels such that `s in t` puts `t` one level above
//! `s`, `s = t` keeps them level, and `{v : B}` sits one level above `v`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::formula::{Formula, Term};

/// One class of occurrences that must share a level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LevelKey {
    Free(String),
    /// A bound variable, identified by its binder's pre-order index.
    Bound(String, usize),
    SetAbs(usize),
    Const(String),
    App(String, usize),
}

impl fmt::Display for LevelKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelKey::Free(n) => write!(f, "{n}"),
            LevelKey::Bound(n, i) => write!(f, "{n}#{i}"),
            LevelKey::SetAbs(i) => write!(f, "{{}}#{i}"),
            LevelKey::Const(c) => write!(f, "{c}"),
            LevelKey::App(s, i) => write!(f, "{s}()#{i}"),
        }
    }
}

/// `level(to) = level(from) + delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub from: LevelKey,
    pub to: LevelKey,
    pub delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratResult {
    Stratified(BTreeMap<LevelKey, i64>),
    /// A cycle of constraints, each step oriented so that its `to` is the
    /// next step's `from`; the deltas sum to a nonzero value.
    Unstratified(Vec<Constraint>),
}

impl StratResult {
    pub fn is_stratified(&self) -> bool {
        matches!(self, StratResult::Stratified(_))
    }

    pub fn summary(&self) -> StratSummary {
        match self {
            StratResult::Stratified(levels) => StratSummary {
                stratified: true,
                levels: levels.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                conflict: Vec::new(),
                conflict_offset: 0,
            },
            StratResult::Unstratified(cycle) => StratSummary {
                stratified: false,
                levels: BTreeMap::new(),
                conflict: cycle
                    .iter()
                    .map(|c| format!("{} -> {} ({:+})", c.from, c.to, c.delta))
                    .collect(),
                conflict_offset: cycle.iter().map(|c| c.delta).sum(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratSummary {
    pub stratified: bool,
    pub levels: BTreeMap<String, i64>,
    pub conflict: Vec<String>,
    pub conflict_offset: i64,
}

/// Occurrence classes and constraints of a formula, in occurrence order.
#[derive(Debug, Default)]
pub struct ConstraintSystem {
    pub nodes: Vec<LevelKey>,
    pub constraints: Vec<(usize, usize, i64)>,
}

impl ConstraintSystem {
    pub fn of(f: &Formula) -> ConstraintSystem {
        let mut b = Builder::default();
        b.formula(f, &mut Vec::new());
        b.sys
    }

    fn node(&mut self, key: LevelKey) -> usize {
        if let Some(i) = self.nodes.iter().position(|k| *k == key) {
            return i;
        }
        self.nodes.push(key);
        self.nodes.len() - 1
    }
}

#[derive(Default)]
struct Builder {
    sys: ConstraintSystem,
    binders: usize,
    abstractions: usize,
    applications: usize,
}

impl Builder {
    fn bind(&mut self, v: &str, scope: &mut Vec<(String, usize)>) -> usize {
        let key = LevelKey::Bound(v.to_string(), self.binders);
        self.binders += 1;
        let id = self.sys.node(key);
        scope.push((v.to_string(), id));
        id
    }

    fn formula(&mut self, f: &Formula, scope: &mut Vec<(String, usize)>) {
        match f {
            Formula::Mem(s, t) => {
                let a = self.term(s, scope);
                let b = self.term(t, scope);
                self.sys.constraints.push((a, b, 1));
            }
            Formula::Eq(s, t) => {
                let a = self.term(s, scope);
                let b = self.term(t, scope);
                self.sys.constraints.push((a, b, 0));
            }
            Formula::Verum | Formula::Falsum => {}
            Formula::Not(a) => self.formula(a, scope),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                self.formula(a, scope);
                self.formula(b, scope);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                self.bind(v, scope);
                self.formula(body, scope);
                scope.pop();
            }
        }
    }

    fn term(&mut self, t: &Term, scope: &mut Vec<(String, usize)>) -> usize {
        match t {
            Term::Var(n) => match scope.iter().rev().find(|(m, _)| m == n) {
                Some((_, id)) => *id,
                None => self.sys.node(LevelKey::Free(n.clone())),
            },
            Term::Const(c) => self.sys.node(LevelKey::Const(c.clone())),
            Term::SetAbs(v, body) => {
                let me = self.sys.node(LevelKey::SetAbs(self.abstractions));
                self.abstractions += 1;
                let bound = self.bind(v, scope);
                self.sys.constraints.push((bound, me, 1));
                self.formula(body, scope);
                scope.pop();
                me
            }
            Term::App(sym, args) => {
                let me = self.sys.node(LevelKey::App(sym.clone(), self.applications));
                self.applications += 1;
                for a in args {
                    self.term(a, scope);
                }
                me
            }
        }
    }
}

pub fn stratify(f: &Formula) -> StratResult {
    let sys = ConstraintSystem::of(f);
    let n = sys.nodes.len();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(a, b, d) in &sys.constraints {
        adj[a].push((b, d));
        adj[b].push((a, -d));
    }

    let mut level: Vec<Option<i64>> = vec![None; n];
    let mut parent: Vec<Option<(usize, i64)>> = vec![None; n];
    let mut component = vec![usize::MAX; n];
    for root in 0..n {
        if level[root].is_some() {
            continue;
        }
        level[root] = Some(0);
        component[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let lu = level[u].expect("visited");
            for &(w, d) in &adj[u] {
                if level[w].is_none() {
                    level[w] = Some(lu + d);
                    parent[w] = Some((u, d));
                    component[w] = root;
                    queue.push_back(w);
                }
            }
        }
    }

    for &(a, b, d) in &sys.constraints {
        let (la, lb) = (level[a].expect("assigned"), level[b].expect("assigned"));
        if lb - la != d {
            let mut cycle = vec![Constraint {
                from: sys.nodes[a].clone(),
                to: sys.nodes[b].clone(),
                delta: d,
            }];
            cycle.extend(tree_path(&sys.nodes, &parent, b, a));
            return StratResult::Unstratified(cycle);
        }
    }

    let mut min_of: BTreeMap<usize, i64> = BTreeMap::new();
    for i in 0..n {
        let l = level[i].expect("assigned");
        let m = min_of.entry(component[i]).or_insert(l);
        *m = (*m).min(l);
    }
    let levels = (0..n)
        .map(|i| {
            (
                sys.nodes[i].clone(),
                level[i].expect("assigned") - min_of[&component[i]],
            )
        })
        .collect();
    StratResult::Stratified(levels)
}

// Walk the BFS tree from `from` up to the common ancestor and down to `to`.
fn tree_path(
    nodes: &[LevelKey],
    parent: &[Option<(usize, i64)>],
    from: usize,
    to: usize,
) -> Vec<Constraint> {
    let ancestors = |mut u: usize| {
        let mut chain = vec![u];
        while let Some((p, _)) = parent[u] {
            chain.push(p);
            u = p;
        }
        chain
    };
    let up = ancestors(from);
    let down = ancestors(to);
    let meet = *up
        .iter()
        .find(|u| down.contains(u))
        .expect("same component");
    let mut steps = Vec::new();
    let mut u = from;
    while u != meet {
        let (p, d) = parent[u].expect("below meet");
        steps.push(Constraint {
            from: nodes[u].clone(),
            to: nodes[p].clone(),
            delta: -d,
        });
        u = p;
    }
    let mut tail = Vec::new();
    let mut v = to;
    while v != meet {
        let (p, d) = parent[v].expect("below meet");
        tail.push(Constraint {
            from: nodes[p].clone(),
            to: nodes[v].clone(),
            delta: d,
        });
        v = p;
    }
    tail.reverse();
    steps.extend(tail);
    steps
}

/// Check a conflict witness without trusting the solver: consecutive steps
/// chain up, the cycle closes, every step is a constraint of `f`, and the
/// offsets do not cancel.
pub fn verify_conflict(f: &Formula, cycle: &[Constraint]) -> bool {
    if cycle.is_empty() {
        return false;
    }
    let sys = ConstraintSystem::of(f);
    let is_constraint = |c: &Constraint| {
        sys.constraints.iter().any(|&(a, b, d)| {
            (sys.nodes[a] == c.from && sys.nodes[b] == c.to && d == c.delta)
                || (sys.nodes[b] == c.from && sys.nodes[a] == c.to && -d == c.delta)
        })
    };
    let chained = cycle.windows(2).all(|w| w[0].to == w[1].from);
    let closed = cycle.last().map(|c| &c.to) == cycle.first().map(|c| &c.from);
    chained
        && closed
        && cycle.iter().all(is_constraint)
        && cycle.iter().map(|c| c.delta).sum::<i64>() != 0
}

/// Re-check an assignment against every constraint of `f`.
pub fn verify_levels(f: &Formula, levels: &BTreeMap<LevelKey, i64>) -> bool {
    let sys = ConstraintSystem::of(f);
    sys.constraints.iter().all(|&(a, b, d)| {
        match (levels.get(&sys.nodes[a]), levels.get(&sys.nodes[b])) {
            (Some(la), Some(lb)) => lb - la == d,
            _ => false,
        }
    })
}
