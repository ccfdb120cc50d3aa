//! A small CDCL SAT solver: two watched literals, first-UIP learning,
//! activity-ordered decisions, restarts and solving under assumptions.

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var * 2 + u32::from(!positive))
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;
const NO_REASON: u32 = u32::MAX;

#[derive(Default)]
pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    values: Vec<i8>,
    levels: Vec<u32>,
    reasons: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    head: usize,
    activity: Vec<f64>,
    bump: f64,
    heap: Vec<u32>,
    heap_pos: Vec<usize>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    /// Set once a clause contradicts the empty assignment.
    unsat: bool,
    pub conflicts: u64,
}

const NOT_IN_HEAP: usize = usize::MAX;

impl Solver {
    pub fn new() -> Solver {
        Solver {
            bump: 1.0,
            ..Solver::default()
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn new_var(&mut self) -> u32 {
        let v = self.values.len() as u32;
        self.values.push(UNDEF);
        self.levels.push(0);
        self.reasons.push(NO_REASON);
        self.activity.push(0.0);
        self.phase.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap_pos.push(NOT_IN_HEAP);
        self.heap_insert(v);
        v
    }

    fn value(&self, l: Lit) -> i8 {
        let v = self.values[l.var() as usize];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    /// Add a clause; only valid between `solve` calls.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        if self.unsat {
            return;
        }
        self.backtrack(0);
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        c.retain(|&l| self.value(l) != FALSE);
        if c.iter().any(|&l| self.value(l) == TRUE) {
            return;
        }
        match c.len() {
            0 => self.unsat = true,
            1 => {
                self.assign(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
            }
            _ => {
                self.attach(c);
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> u32 {
        let id = self.clauses.len() as u32;
        self.watches[(!c[0]).index()].push(id);
        self.watches[(!c[1]).index()].push(id);
        self.clauses.push(c);
        id
    }

    fn assign(&mut self, l: Lit, reason: u32) {
        let v = l.var() as usize;
        self.values[v] = if l.is_positive() { TRUE } else { FALSE };
        self.levels[v] = self.trail_lim.len() as u32;
        self.reasons[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<u32> {
        while self.head < self.trail.len() {
            let l = self.trail[self.head];
            self.head += 1;
            // clauses watching the literal that just became false
            let mut ws = std::mem::take(&mut self.watches[l.index()]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let cid = ws[i];
                let false_lit = !l;
                let c = &mut self.clauses[cid as usize];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                let first_val = {
                    let v = self.values[first.var() as usize];
                    if first.is_positive() {
                        v
                    } else {
                        -v
                    }
                };
                if first_val == TRUE {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let lk = c[k];
                    let v = self.values[lk.var() as usize];
                    let val = if lk.is_positive() { v } else { -v };
                    if val != FALSE {
                        c.swap(1, k);
                        let nw = !c[1];
                        self.watches[nw.index()].push(cid);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    ws.swap_remove(i);
                    continue;
                }
                if first_val == FALSE {
                    conflict = Some(cid);
                    break;
                }
                self.assign(first, cid);
                i += 1;
            }
            let rest = std::mem::take(&mut self.watches[l.index()]);
            ws.extend(rest);
            self.watches[l.index()] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn backtrack(&mut self, level: usize) {
        if self.trail_lim.len() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            self.phase[v] = l.is_positive();
            self.values[v] = UNDEF;
            self.reasons[v] = NO_REASON;
            if self.heap_pos[v] == NOT_IN_HEAP {
                self.heap_insert(v as u32);
            }
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.head = start;
    }

    fn analyze(&mut self, mut conflict: u32) -> (Vec<Lit>, usize) {
        let current = self.trail_lim.len() as u32;
        let mut learnt = vec![Lit(0)];
        let mut pending = 0;
        let mut index = self.trail.len();
        let mut p: Option<Lit> = None;
        loop {
            let clause = self.clauses[conflict as usize].clone();
            let skip = usize::from(p.is_some());
            for &q in &clause[skip..] {
                let v = q.var() as usize;
                if !self.seen[v] && self.levels[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.levels[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            self.seen[lit.var() as usize] = false;
            pending -= 1;
            if pending == 0 {
                learnt[0] = !lit;
                break;
            }
            conflict = self.reasons[lit.var() as usize];
        }
        for l in &learnt[1..] {
            self.seen[l.var() as usize] = false;
        }
        let back = if learnt.len() == 1 {
            0
        } else {
            let mut best = 1;
            for i in 2..learnt.len() {
                if self.levels[learnt[i].var() as usize] > self.levels[learnt[best].var() as usize]
                {
                    best = i;
                }
            }
            learnt.swap(1, best);
            self.levels[learnt[1].var() as usize] as usize
        };
        self.bump *= 1.0 / 0.95;
        (learnt, back)
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.bump;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.bump *= 1e-100;
        }
        if self.heap_pos[v] != NOT_IN_HEAP {
            self.heap_up(self.heap_pos[v]);
        }
    }

    fn heap_less(&self, a: u32, b: u32) -> bool {
        let (x, y) = (self.activity[a as usize], self.activity[b as usize]);
        x > y || (x == y && a < b)
    }

    fn heap_insert(&mut self, v: u32) {
        self.heap_pos[v as usize] = self.heap.len();
        self.heap.push(v);
        self.heap_up(self.heap.len() - 1);
    }

    fn heap_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.heap_less(self.heap[i], self.heap[parent]) {
                break;
            }
            self.heap_swap(i, parent);
            i = parent;
        }
    }

    fn heap_swap(&mut self, i: usize, j: usize) {
        self.heap.swap(i, j);
        self.heap_pos[self.heap[i] as usize] = i;
        self.heap_pos[self.heap[j] as usize] = j;
    }

    fn heap_pop(&mut self) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let last = self.heap.len() - 1;
        self.heap_swap(0, last);
        let v = self.heap.pop().expect("non-empty");
        self.heap_pos[v as usize] = NOT_IN_HEAP;
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < self.heap.len() && self.heap_less(self.heap[l], self.heap[best]) {
                best = l;
            }
            if r < self.heap.len() && self.heap_less(self.heap[r], self.heap[best]) {
                best = r;
            }
            if best == i {
                break;
            }
            self.heap_swap(i, best);
            i = best;
        }
        Some(v)
    }

    /// Solve under assumptions. Returns the satisfying assignment, indexed
    /// by variable.
    pub fn solve(&mut self, assumptions: &[Lit]) -> Option<Vec<bool>> {
        if self.unsat {
            return None;
        }
        self.backtrack(0);
        if self.propagate().is_some() {
            self.unsat = true;
            return None;
        }
        let mut restart_limit = 100u64;
        let mut since_restart = 0u64;
        loop {
            if let Some(conflict) = self.propagate() {
                self.conflicts += 1;
                since_restart += 1;
                if self.trail_lim.is_empty() {
                    self.unsat = true;
                    return None;
                }
                let (learnt, back) = self.analyze(conflict);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.assign(learnt[0], NO_REASON);
                } else {
                    let first = learnt[0];
                    let cid = self.attach(learnt);
                    self.assign(first, cid);
                }
                continue;
            }
            if since_restart >= restart_limit {
                since_restart = 0;
                restart_limit = restart_limit * 3 / 2;
                self.backtrack(0);
                continue;
            }
            // assumptions occupy the first decision levels
            let level = self.trail_lim.len();
            if level < assumptions.len() {
                let a = assumptions[level];
                match self.value(a) {
                    TRUE => {
                        self.trail_lim.push(self.trail.len());
                    }
                    FALSE => {
                        self.backtrack(0);
                        return None;
                    }
                    _ => {
                        self.trail_lim.push(self.trail.len());
                        self.assign(a, NO_REASON);
                    }
                }
                continue;
            }
            let next = loop {
                match self.heap_pop() {
                    None => break None,
                    Some(v) if self.values[v as usize] == UNDEF => break Some(v),
                    Some(_) => {}
                }
            };
            match next {
                None => {
                    let model = self.values.iter().map(|&v| v == TRUE).collect();
                    self.backtrack(0);
                    return Some(model);
                }
                Some(v) => {
                    self.trail_lim.push(self.trail.len());
                    self.assign(Lit::new(v, self.phase[v as usize]), NO_REASON);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(n: u32, clauses: &[Vec<Lit>], assumptions: &[Lit]) -> bool {
        (0..1u32 << n).any(|m| {
            let val = |l: Lit| ((m >> l.var()) & 1 == 1) == l.is_positive();
            assumptions.iter().all(|&a| val(a)) && clauses.iter().all(|c| c.iter().any(|&l| val(l)))
        })
    }

    #[test]
    fn agrees_with_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..400 {
            let n = rng.gen_range(1..=10);
            let m = rng.gen_range(1..=45);
            let clauses: Vec<Vec<Lit>> = (0..m)
                .map(|_| {
                    let k = rng.gen_range(1..=3);
                    (0..k)
                        .map(|_| Lit::new(rng.gen_range(0..n), rng.gen()))
                        .collect()
                })
                .collect();
            let assumptions: Vec<Lit> = (0..rng.gen_range(0..3))
                .map(|_| Lit::new(rng.gen_range(0..n), rng.gen()))
                .collect();
            let mut s = Solver::new();
            for _ in 0..n {
                s.new_var();
            }
            for c in &clauses {
                s.add_clause(c);
            }
            let got = s.solve(&assumptions);
            assert_eq!(
                got.is_some(),
                brute(n, &clauses, &assumptions),
                "round {round}"
            );
            if let Some(model) = got {
                let val = |l: Lit| model[l.var() as usize] == l.is_positive();
                assert!(clauses.iter().all(|c| c.iter().any(|&l| val(l))));
                assert!(assumptions.iter().all(|&a| val(a)));
            }
            // solving again without assumptions stays consistent
            assert_eq!(s.solve(&[]).is_some(), brute(n, &clauses, &[]));
        }
    }

    #[test]
    fn pigeonhole_is_unsat() {
        let (pigeons, holes) = (5u32, 4u32);
        let mut s = Solver::new();
        let var = |p: u32, h: u32| p * holes + h;
        for _ in 0..pigeons * holes {
            s.new_var();
        }
        for p in 0..pigeons {
            let c: Vec<Lit> = (0..holes).map(|h| Lit::new(var(p, h), true)).collect();
            s.add_clause(&c);
        }
        for h in 0..holes {
            for p in 0..pigeons {
                for q in p + 1..pigeons {
                    s.add_clause(&[Lit::new(var(p, h), false), Lit::new(var(q, h), false)]);
                }
            }
        }
        assert!(s.solve(&[]).is_none());
    }
}
