//! Ground tableau search with iterative deepening over term depth.
//!
//! Formulas and terms are hash-consed. A branch is explored depth-first
//! with an explicit stack of case splits; leaving a case restores the branch
//! from a trail. Every derived formula becomes a proof line carrying the set
//! of open hypotheses it depends on, so a closed branch that never used its
//! hypothesis closes the enclosing branch directly.

use rustc_hash::{FxHashMap, FxHashSet};

use super::proof::{Proof, Rule, Step};
use super::theory::Theory;
use crate::formula::{Formula, Term};

type Sym = u32;
type TId = u32;
type FId = u32;
type LId = u32;

#[derive(Clone, PartialEq, Eq, Hash)]
enum GTerm {
    Var(Sym),
    Const(Sym),
    App(Sym, Box<[TId]>),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum GForm {
    Mem(TId, TId),
    Eq(TId, TId),
    Verum,
    Falsum,
    Not(FId),
    And(FId, FId),
    Or(FId, FId),
    Implies(FId, FId),
    Iff(FId, FId),
    Forall(Sym, FId),
    Exists(Sym, FId),
}

#[derive(Clone, Copy)]
enum Kind {
    Literal,
    Inert,
    Closer,
    Alpha(FId, Option<FId>),
    Beta(FId, FId),
    Gamma { v: Sym, body: FId, negated: bool },
    Delta { v: Sym, body: FId, negated: bool },
}

#[derive(Default)]
struct Store {
    names: Vec<String>,
    sym_ix: FxHashMap<String, Sym>,
    terms: Vec<GTerm>,
    term_depth: Vec<u8>,
    term_ix: FxHashMap<GTerm, TId>,
    forms: Vec<GForm>,
    form_ix: FxHashMap<GForm, FId>,
    kinds: Vec<Option<Kind>>,
    const_depth: FxHashMap<Sym, u8>,
    subst_memo: FxHashMap<(FId, Sym, TId), FId>,
    tsubst_memo: FxHashMap<(TId, Sym, TId), TId>,
}

impl Store {
    fn sym(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.sym_ix.get(name) {
            return s;
        }
        let s = self.names.len() as Sym;
        self.names.push(name.to_string());
        self.sym_ix.insert(name.to_string(), s);
        s
    }

    fn term(&mut self, t: GTerm) -> TId {
        if let Some(&id) = self.term_ix.get(&t) {
            return id;
        }
        let depth = match &t {
            GTerm::Var(_) => 0,
            GTerm::Const(c) => self.const_depth.get(c).copied().unwrap_or(1),
            GTerm::App(_, args) => 1u8.saturating_add(
                args.iter()
                    .map(|&a| self.term_depth[a as usize])
                    .max()
                    .unwrap_or(0),
            ),
        };
        let id = self.terms.len() as TId;
        self.terms.push(t.clone());
        self.term_depth.push(depth);
        self.term_ix.insert(t, id);
        id
    }

    fn form(&mut self, f: GForm) -> FId {
        if let Some(&id) = self.form_ix.get(&f) {
            return id;
        }
        let id = self.forms.len() as FId;
        self.forms.push(f);
        self.kinds.push(None);
        self.form_ix.insert(f, id);
        id
    }

    fn not(&mut self, f: FId) -> FId {
        self.form(GForm::Not(f))
    }

    /// The formula that closes a branch together with `f`.
    fn complement(&mut self, f: FId) -> FId {
        match self.forms[f as usize] {
            GForm::Not(g) => g,
            _ => self.not(f),
        }
    }

    fn complement_if_known(&self, f: FId) -> Option<FId> {
        match self.forms[f as usize] {
            GForm::Not(g) => Some(g),
            _ => self.form_ix.get(&GForm::Not(f)).copied(),
        }
    }

    fn intern_term(&mut self, t: &Term) -> TId {
        match t {
            Term::Var(n) => {
                let s = self.sym(n);
                self.term(GTerm::Var(s))
            }
            Term::Const(n) => {
                let s = self.sym(n);
                self.term(GTerm::Const(s))
            }
            Term::App(f, args) => {
                let s = self.sym(f);
                let args: Box<[TId]> = args.iter().map(|a| self.intern_term(a)).collect();
                self.term(GTerm::App(s, args))
            }
            Term::SetAbs(..) => {
                panic!("set-builder terms are replaced by constants before the search")
            }
        }
    }

    fn intern(&mut self, f: &Formula) -> FId {
        let g = match f {
            Formula::Mem(s, t) => GForm::Mem(self.intern_term(s), self.intern_term(t)),
            Formula::Eq(s, t) => GForm::Eq(self.intern_term(s), self.intern_term(t)),
            Formula::Verum => GForm::Verum,
            Formula::Falsum => GForm::Falsum,
            Formula::Not(a) => GForm::Not(self.intern(a)),
            Formula::And(a, b) => GForm::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => GForm::Or(self.intern(a), self.intern(b)),
            Formula::Implies(a, b) => GForm::Implies(self.intern(a), self.intern(b)),
            Formula::Iff(a, b) => GForm::Iff(self.intern(a), self.intern(b)),
            Formula::Forall(v, a) => GForm::Forall(self.sym(v), self.intern(a)),
            Formula::Exists(v, a) => GForm::Exists(self.sym(v), self.intern(a)),
        };
        self.form(g)
    }

    fn decode_term(&self, t: TId) -> Term {
        match &self.terms[t as usize] {
            GTerm::Var(s) => Term::Var(self.names[*s as usize].clone()),
            GTerm::Const(s) => Term::Const(self.names[*s as usize].clone()),
            GTerm::App(s, args) => Term::App(
                self.names[*s as usize].clone(),
                args.iter().map(|&a| self.decode_term(a)).collect(),
            ),
        }
    }

    fn decode(&self, f: FId) -> Formula {
        match self.forms[f as usize] {
            GForm::Mem(s, t) => Formula::Mem(self.decode_term(s), self.decode_term(t)),
            GForm::Eq(s, t) => Formula::Eq(self.decode_term(s), self.decode_term(t)),
            GForm::Verum => Formula::Verum,
            GForm::Falsum => Formula::Falsum,
            GForm::Not(a) => Formula::not(self.decode(a)),
            GForm::And(a, b) => Formula::and(self.decode(a), self.decode(b)),
            GForm::Or(a, b) => Formula::or(self.decode(a), self.decode(b)),
            GForm::Implies(a, b) => Formula::implies(self.decode(a), self.decode(b)),
            GForm::Iff(a, b) => Formula::iff(self.decode(a), self.decode(b)),
            GForm::Forall(v, a) => Formula::forall(&self.names[v as usize], self.decode(a)),
            GForm::Exists(v, a) => Formula::exists(&self.names[v as usize], self.decode(a)),
        }
    }

    fn subst_term(&mut self, t: TId, v: Sym, by: TId) -> TId {
        match &self.terms[t as usize] {
            GTerm::Var(s) if *s == v => by,
            GTerm::Var(_) | GTerm::Const(_) => t,
            GTerm::App(f, args) => {
                if let Some(&r) = self.tsubst_memo.get(&(t, v, by)) {
                    return r;
                }
                let (f, args) = (*f, args.clone());
                let new: Box<[TId]> = args.iter().map(|&a| self.subst_term(a, v, by)).collect();
                let r = self.term(GTerm::App(f, new));
                self.tsubst_memo.insert((t, v, by), r);
                r
            }
        }
    }

    /// Replace free `v` by the ground term `by`; no capture is possible.
    fn subst(&mut self, f: FId, v: Sym, by: TId) -> FId {
        if let Some(&r) = self.subst_memo.get(&(f, v, by)) {
            return r;
        }
        let g = match self.forms[f as usize] {
            GForm::Mem(s, t) => GForm::Mem(self.subst_term(s, v, by), self.subst_term(t, v, by)),
            GForm::Eq(s, t) => GForm::Eq(self.subst_term(s, v, by), self.subst_term(t, v, by)),
            GForm::Verum | GForm::Falsum => return f,
            GForm::Not(a) => GForm::Not(self.subst(a, v, by)),
            GForm::And(a, b) => GForm::And(self.subst(a, v, by), self.subst(b, v, by)),
            GForm::Or(a, b) => GForm::Or(self.subst(a, v, by), self.subst(b, v, by)),
            GForm::Implies(a, b) => GForm::Implies(self.subst(a, v, by), self.subst(b, v, by)),
            GForm::Iff(a, b) => GForm::Iff(self.subst(a, v, by), self.subst(b, v, by)),
            GForm::Forall(w, _) | GForm::Exists(w, _) if w == v => return f,
            GForm::Forall(w, a) => GForm::Forall(w, self.subst(a, v, by)),
            GForm::Exists(w, a) => GForm::Exists(w, self.subst(a, v, by)),
        };
        let r = self.form(g);
        self.subst_memo.insert((f, v, by), r);
        r
    }

    fn kind(&mut self, f: FId) -> Kind {
        if let Some(k) = self.kinds[f as usize] {
            return k;
        }
        let k = match self.forms[f as usize] {
            GForm::Mem(..) | GForm::Eq(..) => Kind::Literal,
            GForm::Verum => Kind::Inert,
            GForm::Falsum => Kind::Closer,
            GForm::And(a, b) => Kind::Alpha(a, Some(b)),
            GForm::Or(a, b) => Kind::Beta(a, b),
            GForm::Implies(a, b) => Kind::Beta(self.not(a), b),
            GForm::Iff(a, b) => {
                let ab = self.form(GForm::Implies(a, b));
                let ba = self.form(GForm::Implies(b, a));
                Kind::Alpha(ab, Some(ba))
            }
            GForm::Forall(v, body) => Kind::Gamma {
                v,
                body,
                negated: false,
            },
            GForm::Exists(v, body) => Kind::Delta {
                v,
                body,
                negated: false,
            },
            GForm::Not(g) => match self.forms[g as usize] {
                GForm::Mem(..) | GForm::Eq(..) => Kind::Literal,
                GForm::Verum => Kind::Closer,
                GForm::Falsum => Kind::Inert,
                GForm::Not(a) => Kind::Alpha(a, None),
                GForm::And(a, b) => Kind::Beta(self.not(a), self.not(b)),
                GForm::Or(a, b) => Kind::Alpha(self.not(a), Some(self.not(b))),
                GForm::Implies(a, b) => Kind::Alpha(a, Some(self.not(b))),
                GForm::Iff(a, b) => {
                    let nb = self.not(b);
                    let na = self.not(a);
                    Kind::Beta(self.form(GForm::And(a, nb)), self.form(GForm::And(na, b)))
                }
                GForm::Forall(v, body) => Kind::Delta {
                    v,
                    body,
                    negated: true,
                },
                GForm::Exists(v, body) => Kind::Gamma {
                    v,
                    body,
                    negated: true,
                },
            },
        };
        self.kinds[f as usize] = Some(k);
        k
    }

    fn instance(&mut self, v: Sym, body: FId, negated: bool, t: TId) -> FId {
        let inst = self.subst(body, v, t);
        if negated {
            self.not(inst)
        } else {
            inst
        }
    }
}

/// Hypotheses a line depends on, as a bit set over case-split levels.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
struct Deps(Vec<u64>);

impl Deps {
    fn single(k: usize) -> Deps {
        let mut d = Deps(vec![0; k / 64 + 1]);
        d.0[k / 64] |= 1 << (k % 64);
        d
    }

    fn has(&self, k: usize) -> bool {
        self.0.get(k / 64).is_some_and(|w| w & (1 << (k % 64)) != 0)
    }

    fn union_with(&mut self, other: &Deps) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn without(mut self, k: usize) -> Deps {
        if let Some(w) = self.0.get_mut(k / 64) {
            *w &= !(1 << (k % 64));
        }
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }
}

struct Line {
    form: FId,
    rule: Rule,
    premises: Vec<LId>,
    deps: Deps,
    ctx: u8,
    aux: bool,
}

const CORE: usize = 0;
const AUX: usize = 1;

#[derive(Clone)]
struct Mark {
    present: usize,
    watch: usize,
    alpha: (usize, usize),
    unit: (usize, usize),
    betas: [(usize, usize); 2],
    gammas: [usize; 2],
    terms: usize,
    tasks: [Vec<(usize, usize)>; 2],
}

struct Frame {
    beta: LId,
    second: FId,
    mark: Mark,
    in_second: bool,
    first_hyp: LId,
    first_falsum: LId,
    second_hyp: LId,
}

#[derive(Default)]
struct Branch {
    present: FxHashMap<FId, LId>,
    present_trail: Vec<FId>,
    watch: FxHashMap<FId, Vec<LId>>,
    watch_trail: Vec<FId>,
    alpha_q: Vec<LId>,
    alpha_head: usize,
    unit_q: Vec<(LId, LId)>,
    unit_head: usize,
    betas: [Vec<LId>; 2],
    beta_scan: [usize; 2],
    gammas: [Vec<LId>; 2],
    terms: Vec<TId>,
    term_set: FxHashSet<TId>,
    /// Pending gamma instances per class and term depth, FIFO.
    tasks: [Vec<Vec<(LId, TId)>>; 2],
    task_heads: [Vec<usize>; 2],
}

enum LevelOutcome {
    Closed(LId),
    Saturated,
    OutOfSteps,
}

pub(crate) enum SearchResult {
    Found(Proof),
    Exhausted { depth: usize, steps: usize },
}

pub(crate) struct Search<'t> {
    theory: &'t Theory,
    store: Store,
    axioms: Vec<FId>,
    constants: Vec<TId>,
    functions: Vec<(Sym, usize)>,
    reserved: FxHashSet<String>,
    lines: Vec<Line>,
    branch: Branch,
    frames: Vec<Frame>,
    depth: u8,
    steps: usize,
    max_steps: usize,
    witnesses: usize,
}

/// `Err` carries a Falsum line that closed the current branch.
type Flow = Result<(), LId>;

impl<'t> Search<'t> {
    pub(crate) fn new(theory: &'t Theory, max_steps: usize) -> Search<'t> {
        let mut store = Store::default();
        let axioms = theory.sentences.iter().map(|s| store.intern(s)).collect();
        let constants = theory
            .constants
            .iter()
            .filter(|c| c.params.is_empty())
            .map(|c| {
                let s = store.sym(&c.name);
                store.term(GTerm::Const(s))
            })
            .collect();
        let functions = theory
            .functions
            .iter()
            .map(|(f, n)| (store.sym(f), *n))
            .collect();
        let reserved = theory.identifiers().into_iter().collect();
        Search {
            theory,
            store,
            axioms,
            constants,
            functions,
            reserved,
            lines: Vec::new(),
            branch: Branch::default(),
            frames: Vec::new(),
            depth: 1,
            steps: 0,
            max_steps,
            witnesses: 0,
        }
    }

    pub(crate) fn run(mut self, max_depth: usize) -> SearchResult {
        let max_depth = max_depth.clamp(1, u8::MAX as usize - 1);
        for d in 1..=max_depth {
            match self.level(d as u8) {
                LevelOutcome::Closed(f) => {
                    let proof = self.extract(f, d);
                    return SearchResult::Found(proof);
                }
                LevelOutcome::OutOfSteps => {
                    return SearchResult::Exhausted {
                        depth: d,
                        steps: self.steps,
                    }
                }
                LevelOutcome::Saturated => {}
            }
        }
        SearchResult::Exhausted {
            depth: max_depth,
            steps: self.steps,
        }
    }

    fn reset(&mut self, d: u8) {
        self.depth = d;
        self.lines.clear();
        self.frames.clear();
        self.witnesses = 0;
        self.branch = Branch::default();
        for class in [CORE, AUX] {
            self.branch.tasks[class] = vec![Vec::new(); d as usize + 1];
            self.branch.task_heads[class] = vec![0; d as usize + 1];
        }
    }

    fn level(&mut self, d: u8) -> LevelOutcome {
        self.reset(d);
        for c in self.constants.clone() {
            self.add_term(c);
        }
        for i in 0..self.axioms.len() {
            let aux = !self.theory.is_core(i);
            if let Err(f) = self.add(
                self.axioms[i],
                Rule::Axiom,
                Vec::new(),
                Deps::default(),
                0,
                aux,
            ) {
                if let Some(done) = self.closed(f) {
                    return LevelOutcome::Closed(done);
                }
            }
        }
        loop {
            if self.steps >= self.max_steps {
                return LevelOutcome::OutOfSteps;
            }
            let outcome = match self.next_action() {
                Some(r) => r,
                None => return LevelOutcome::Saturated,
            };
            if let Err(f) = outcome {
                if let Some(done) = self.closed(f) {
                    return LevelOutcome::Closed(done);
                }
            }
        }
    }

    /// Perform the highest-priority pending rule; `None` when the branch is
    /// saturated.
    fn next_action(&mut self) -> Option<Flow> {
        if self.branch.alpha_head < self.branch.alpha_q.len() {
            let l = self.branch.alpha_q[self.branch.alpha_head];
            self.branch.alpha_head += 1;
            return Some(self.expand(l));
        }
        while self.branch.unit_head < self.branch.unit_q.len() {
            let (b, q) = self.branch.unit_q[self.branch.unit_head];
            self.branch.unit_head += 1;
            if !self.resolved(b) {
                return Some(self.unit(b, q));
            }
        }
        if let Some(r) = self.gamma_task(CORE) {
            return Some(r);
        }
        if let Some(b) = self.open_beta(CORE) {
            return Some(self.split(b));
        }
        if let Some(r) = self.gamma_task(AUX) {
            return Some(r);
        }
        if let Some(b) = self.open_beta(AUX) {
            return Some(self.split(b));
        }
        None
    }

    fn add(
        &mut self,
        form: FId,
        rule: Rule,
        premises: Vec<LId>,
        deps: Deps,
        ctx: u8,
        aux: bool,
    ) -> Flow {
        if self.branch.present.contains_key(&form) {
            return Ok(());
        }
        let l = self.push_line(Line {
            form,
            rule,
            premises,
            deps,
            ctx,
            aux,
        });
        self.branch.present.insert(form, l);
        self.branch.present_trail.push(form);

        let kind = self.store.kind(form);
        if let Kind::Closer = kind {
            return Err(self.close(vec![l]));
        }
        if let Some(c) = self.store.complement_if_known(form) {
            if let Some(&q) = self.branch.present.get(&c) {
                return Err(self.close(vec![q, l]));
            }
        }
        if let Some(ws) = self.branch.watch.get(&form) {
            for &b in ws {
                self.branch.unit_q.push((b, l));
            }
        }
        let class = if aux { AUX } else { CORE };
        match kind {
            Kind::Literal | Kind::Inert | Kind::Closer => {}
            Kind::Alpha(..) | Kind::Delta { .. } => self.branch.alpha_q.push(l),
            Kind::Beta(a, b) => {
                let na = self.store.complement(a);
                let nb = self.store.complement(b);
                if na == b {
                    return Ok(());
                }
                for n in [na, nb] {
                    self.branch.watch.entry(n).or_default().push(l);
                    self.branch.watch_trail.push(n);
                    if let Some(&q) = self.branch.present.get(&n) {
                        self.branch.unit_q.push((l, q));
                    }
                }
                self.branch.betas[class].push(l);
            }
            Kind::Gamma { .. } => {
                self.branch.gammas[class].push(l);
                for i in 0..self.branch.terms.len() {
                    let t = self.branch.terms[i];
                    let dt = self.store.term_depth[t as usize] as usize;
                    self.branch.tasks[class][dt].push((l, t));
                }
            }
        }
        Ok(())
    }

    fn push_line(&mut self, line: Line) -> LId {
        self.steps += 1;
        self.lines.push(line);
        (self.lines.len() - 1) as LId
    }

    fn close(&mut self, premises: Vec<LId>) -> LId {
        let mut deps = Deps::default();
        for &p in &premises {
            deps.union_with(&self.lines[p as usize].deps);
        }
        let falsum = self.store.form(GForm::Falsum);
        self.push_line(Line {
            form: falsum,
            rule: Rule::Close,
            premises,
            deps,
            ctx: 0,
            aux: false,
        })
    }

    fn line_info(&self, l: LId) -> (Deps, u8, bool) {
        let line = &self.lines[l as usize];
        (line.deps.clone(), line.ctx, line.aux)
    }

    fn expand(&mut self, l: LId) -> Flow {
        let (deps, ctx, aux) = self.line_info(l);
        match self.store.kind(self.lines[l as usize].form) {
            Kind::Alpha(a, b) => {
                self.add(a, Rule::Alpha, vec![l], deps.clone(), ctx, aux)?;
                if let Some(b) = b {
                    self.add(b, Rule::Alpha, vec![l], deps, ctx, aux)?;
                }
                Ok(())
            }
            Kind::Delta { v, body, negated } => {
                let w = self.fresh_witness(ctx.saturating_add(1));
                let inst = self.store.instance(v, body, negated, w);
                self.add(inst, Rule::Delta, vec![l], deps, ctx, aux)?;
                self.add_term(w);
                Ok(())
            }
            _ => unreachable!("only alpha and delta lines are queued"),
        }
    }

    fn fresh_witness(&mut self, depth: u8) -> TId {
        let name = loop {
            self.witnesses += 1;
            let name = format!("w{}", self.witnesses);
            if !self.reserved.contains(&name) {
                break name;
            }
        };
        let s = self.store.sym(&name);
        self.store.const_depth.insert(s, depth);
        self.store.term(GTerm::Const(s))
    }

    fn resolved(&mut self, b: LId) -> bool {
        match self.store.kind(self.lines[b as usize].form) {
            Kind::Beta(x, y) => {
                self.branch.present.contains_key(&x) || self.branch.present.contains_key(&y)
            }
            _ => true,
        }
    }

    fn unit(&mut self, b: LId, q: LId) -> Flow {
        let Kind::Beta(x, y) = self.store.kind(self.lines[b as usize].form) else {
            unreachable!()
        };
        let qf = self.lines[q as usize].form;
        let derived = if self.store.complement(x) == qf { y } else { x };
        let (mut deps, ctx, aux) = self.line_info(b);
        let (qdeps, qctx, _) = self.line_info(q);
        deps.union_with(&qdeps);
        self.add(
            derived,
            Rule::BetaUnit,
            vec![b, q],
            deps,
            ctx.max(qctx),
            aux,
        )
    }

    fn gamma_task(&mut self, class: usize) -> Option<Flow> {
        for dt in 1..=self.depth as usize {
            while self.branch.task_heads[class][dt] < self.branch.tasks[class][dt].len() {
                let (g, t) = self.branch.tasks[class][dt][self.branch.task_heads[class][dt]];
                self.branch.task_heads[class][dt] += 1;
                let Kind::Gamma { v, body, negated } = self.store.kind(self.lines[g as usize].form)
                else {
                    unreachable!()
                };
                let inst = self.store.instance(v, body, negated, t);
                if self.branch.present.contains_key(&inst) {
                    continue;
                }
                let (deps, ctx, aux) = self.line_info(g);
                return Some(self.add(inst, Rule::Gamma, vec![g], deps, ctx.max(dt as u8), aux));
            }
        }
        None
    }

    fn open_beta(&mut self, class: usize) -> Option<LId> {
        while self.branch.beta_scan[class] < self.branch.betas[class].len() {
            let b = self.branch.betas[class][self.branch.beta_scan[class]];
            if !self.resolved(b) {
                return Some(b);
            }
            self.branch.beta_scan[class] += 1;
        }
        None
    }

    fn mark(&self) -> Mark {
        let b = &self.branch;
        Mark {
            present: b.present_trail.len(),
            watch: b.watch_trail.len(),
            alpha: (b.alpha_q.len(), b.alpha_head),
            unit: (b.unit_q.len(), b.unit_head),
            betas: [
                (b.betas[0].len(), b.beta_scan[0]),
                (b.betas[1].len(), b.beta_scan[1]),
            ],
            gammas: [b.gammas[0].len(), b.gammas[1].len()],
            terms: b.terms.len(),
            tasks: [0, 1].map(|c| {
                b.tasks[c]
                    .iter()
                    .zip(&b.task_heads[c])
                    .map(|(q, &h)| (q.len(), h))
                    .collect()
            }),
        }
    }

    fn undo(&mut self, m: &Mark) {
        let b = &mut self.branch;
        for f in b.present_trail.drain(m.present..) {
            b.present.remove(&f);
        }
        for f in b.watch_trail.drain(m.watch..) {
            if let Some(ws) = b.watch.get_mut(&f) {
                ws.pop();
            }
        }
        b.alpha_q.truncate(m.alpha.0);
        b.alpha_head = m.alpha.1;
        b.unit_q.truncate(m.unit.0);
        b.unit_head = m.unit.1;
        for c in [CORE, AUX] {
            b.betas[c].truncate(m.betas[c].0);
            b.beta_scan[c] = m.betas[c].1;
            b.gammas[c].truncate(m.gammas[c]);
            for (i, &(len, head)) in m.tasks[c].iter().enumerate() {
                b.tasks[c][i].truncate(len);
                b.task_heads[c][i] = head;
            }
        }
        for t in b.terms.drain(m.terms..) {
            b.term_set.remove(&t);
        }
    }

    fn split(&mut self, b: LId) -> Flow {
        let Kind::Beta(first, second) = self.store.kind(self.lines[b as usize].form) else {
            unreachable!()
        };
        let (_, ctx, aux) = self.line_info(b);
        let mark = self.mark();
        let k = self.frames.len();
        let hyp = self.lines.len() as LId;
        self.frames.push(Frame {
            beta: b,
            second,
            mark,
            in_second: false,
            first_hyp: hyp,
            first_falsum: 0,
            second_hyp: 0,
        });
        self.add(first, Rule::Assume, Vec::new(), Deps::single(k), ctx, aux)
    }

    /// A Falsum line was derived on the current branch. Returns the final
    /// line when the whole tableau is closed.
    fn closed(&mut self, mut f: LId) -> Option<LId> {
        loop {
            let k = match self.frames.len() {
                0 => return Some(f),
                n => n - 1,
            };
            if !self.lines[f as usize].deps.has(k) {
                let frame = self.frames.pop().expect("frame");
                self.undo(&frame.mark);
                continue;
            }
            let frame = self.frames.last_mut().expect("frame");
            if !frame.in_second {
                frame.in_second = true;
                frame.first_falsum = f;
                frame.second_hyp = self.lines.len() as LId;
                let mark = frame.mark.clone();
                let (second, beta) = (frame.second, frame.beta);
                self.undo(&mark);
                let (_, ctx, aux) = self.line_info(beta);
                match self.add(second, Rule::Assume, Vec::new(), Deps::single(k), ctx, aux) {
                    Ok(()) => return None,
                    Err(g) => {
                        f = g;
                        continue;
                    }
                }
            }
            let frame = self.frames.pop().expect("frame");
            self.undo(&frame.mark);
            let mut deps = self.lines[frame.beta as usize].deps.clone();
            let d1 = self.lines[frame.first_falsum as usize]
                .deps
                .clone()
                .without(k);
            let d2 = self.lines[f as usize].deps.clone().without(k);
            deps.union_with(&d1);
            deps.union_with(&d2);
            let falsum = self.store.form(GForm::Falsum);
            f = self.push_line(Line {
                form: falsum,
                rule: Rule::Cases,
                premises: vec![
                    frame.beta,
                    frame.first_hyp,
                    frame.first_falsum,
                    frame.second_hyp,
                    f,
                ],
                deps,
                ctx: 0,
                aux: false,
            });
        }
    }

    fn add_term(&mut self, t: TId) {
        let mut work = vec![t];
        while let Some(t) = work.pop() {
            let dt = self.store.term_depth[t as usize];
            if dt > self.depth || self.branch.term_set.contains(&t) {
                continue;
            }
            self.branch.term_set.insert(t);
            self.branch.terms.push(t);
            for class in [CORE, AUX] {
                for &g in &self.branch.gammas[class] {
                    self.branch.tasks[class][dt as usize].push((g, t));
                }
            }
            for (f, arity) in self.functions.clone() {
                if dt + 1 > self.depth {
                    continue;
                }
                let pool = self.branch.terms.clone();
                let mut idx = vec![0usize; arity];
                'tuples: loop {
                    let args: Vec<TId> = idx.iter().map(|&i| pool[i]).collect();
                    if args.contains(&t) {
                        let app = self.store.term(GTerm::App(f, args.into_boxed_slice()));
                        work.push(app);
                    }
                    for pos in (0..arity).rev() {
                        idx[pos] += 1;
                        if idx[pos] < pool.len() {
                            continue 'tuples;
                        }
                        idx[pos] = 0;
                    }
                    break;
                }
            }
        }
    }

    fn extract(&self, last: LId, depth: usize) -> Proof {
        let mut keep = vec![false; self.lines.len()];
        let mut stack = vec![last];
        while let Some(l) = stack.pop() {
            if std::mem::replace(&mut keep[l as usize], true) {
                continue;
            }
            stack.extend(&self.lines[l as usize].premises);
        }
        let mut renumber = vec![0usize; self.lines.len()];
        let mut steps = Vec::new();
        for (i, line) in self.lines.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            let id = steps.len() + 1;
            renumber[i] = id;
            steps.push(Step {
                id,
                rule: line.rule,
                premises: line
                    .premises
                    .iter()
                    .map(|&p| renumber[p as usize])
                    .collect(),
                formula: self.store.decode(line.form),
            });
        }
        Proof {
            steps,
            depth_used: depth,
            search_steps: self.steps,
        }
    }
}
