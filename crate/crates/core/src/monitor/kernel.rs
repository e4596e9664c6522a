//! Bottom-up signal computation shared by the centralized and distributed
//! monitors.
//!
//! A formula is lowered to an arena of core operators, children before
//! parents. Each operator gets one signal per agent over `t0..=end`;
//! signals of an operator are computed for all agents before its parent is
//! visited, optionally in parallel across agents.

use rayon::prelude::*;

use super::Logic;
use crate::error::{Error, Result};
use crate::formula::{
    Bound, CountSet, Direction, GlobalExpr, GlobalFormula, LocalExpr, LocalFormula, Quantifier, TimeInterval,
    WeightInterval,
};
use crate::model::MasRun;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Op {
    True,
    Atom(LocalExpr),
    Not(usize),
    And(usize, usize),
    Until(TimeInterval, usize, usize),
    Graph {
        dir: Direction,
        quant: Quantifier,
        graphs: Vec<String>,
        count: CountSet,
        weight: WeightInterval,
        child: usize,
    },
}

/// An agent-local formula lowered to core operators.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Program {
    pub ops: Vec<Op>,
    pub root: usize,
}

impl Program {
    pub fn compile(f: &LocalFormula) -> Self {
        let mut ops = Vec::new();
        let root = lower_local(f, &mut ops);
        Self { ops, root }
    }

    /// Checks graph tags and state components against a run.
    pub fn validate(&self, run: &MasRun) -> Result<()> {
        for op in &self.ops {
            match op {
                Op::Atom(e) => check_components(e.vars().into_iter().map(|c| c.0), run)?,
                Op::Graph { graphs, .. } => {
                    for g in graphs {
                        if !run.graphs().contains(g) {
                            return Err(Error::UnknownGraphType(g.clone()));
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn check_components(mut comps: impl Iterator<Item = usize>, run: &MasRun) -> Result<()> {
    match comps.find(|&k| k >= run.state_dim()) {
        Some(component) => Err(Error::ComponentOutOfRange { component, state_dim: run.state_dim() }),
        None => Ok(()),
    }
}

fn push(ops: &mut Vec<Op>, op: Op) -> usize {
    ops.push(op);
    ops.len() - 1
}

fn lower_local(f: &LocalFormula, ops: &mut Vec<Op>) -> usize {
    use LocalFormula::*;
    match f {
        True => push(ops, Op::True),
        Atom(e) => push(ops, Op::Atom(e.clone())),
        Not(a) => {
            let a = lower_local(a, ops);
            push(ops, Op::Not(a))
        }
        And(a, b) => {
            let a = lower_local(a, ops);
            let b = lower_local(b, ops);
            push(ops, Op::And(a, b))
        }
        Or(a, b) => {
            let a = lower_local(a, ops);
            let b = lower_local(b, ops);
            or(ops, a, b)
        }
        Implies(a, b) => {
            let a = lower_local(a, ops);
            let na = push(ops, Op::Not(a));
            let b = lower_local(b, ops);
            or(ops, na, b)
        }
        Until(i, a, b) => {
            let a = lower_local(a, ops);
            let b = lower_local(b, ops);
            push(ops, Op::Until(*i, a, b))
        }
        Eventually(i, a) => {
            let t = push(ops, Op::True);
            let a = lower_local(a, ops);
            push(ops, Op::Until(*i, t, a))
        }
        Always(i, a) => {
            let t = push(ops, Op::True);
            let a = lower_local(a, ops);
            let na = push(ops, Op::Not(a));
            let u = push(ops, Op::Until(*i, t, na));
            push(ops, Op::Not(u))
        }
        Graph(op) => {
            let child = lower_local(&op.child, ops);
            push(
                ops,
                Op::Graph {
                    dir: op.dir,
                    quant: op.quant,
                    graphs: op.graphs.clone(),
                    count: op.count.clone(),
                    weight: op.weight,
                    child,
                },
            )
        }
    }
}

fn or(ops: &mut Vec<Op>, a: usize, b: usize) -> usize {
    let na = push(ops, Op::Not(a));
    let nb = push(ops, Op::Not(b));
    let and = push(ops, Op::And(na, nb));
    push(ops, Op::Not(and))
}

/// The time range `t0..=end` that signals are computed over.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Span {
    pub t0: usize,
    pub end: usize,
    /// Last index of the trace; temporal windows are clamped against it.
    pub length: usize,
}

impl Span {
    pub fn len(&self) -> usize {
        self.end - self.t0 + 1
    }

    /// The window of `t + I`, clipped to the computed range.
    fn window(&self, i: &TimeInterval, t: usize) -> Option<(usize, usize)> {
        let (s, e) = i.window(t, self.length)?;
        let e = e.min(self.end);
        (s <= e).then_some((s, e))
    }
}

/// Per-operator, per-agent signals of a local program.
pub(crate) struct Table<L> {
    pub len: usize,
    /// `signals[op][(agent - 1) * len + (t - t0)]`
    pub signals: Vec<Vec<L>>,
}

impl<L: Logic> Table<L> {
    pub fn get(&self, op: usize, agent: usize, k: usize) -> L {
        self.signals[op][(agent - 1) * self.len + k]
    }

    pub fn row(&self, op: usize, agent: usize) -> &[L] {
        &self.signals[op][(agent - 1) * self.len..agent * self.len]
    }
}

/// Evaluates every operator of `prog` for every agent over `span`.
///
/// `atom(e, agent, t)` decides predicates; it is where knowledge masks enter.
pub(crate) fn evaluate<L: Logic>(
    run: &MasRun,
    prog: &Program,
    span: Span,
    parallel: bool,
    atom: &(dyn Fn(&LocalExpr, usize, usize) -> L + Sync),
) -> Table<L> {
    let n = run.num_agents();
    let len = span.len();
    let mut table = Table { len, signals: Vec::with_capacity(prog.ops.len()) };
    for op in &prog.ops {
        let mut out = vec![L::FALSE; n * len];
        {
            let fill = |(ai, row): (usize, &mut [L])| eval_row(run, op, &table, span, ai + 1, row, atom);
            if parallel && n > 1 {
                out.par_chunks_mut(len).enumerate().for_each(fill);
            } else {
                out.chunks_mut(len).enumerate().for_each(fill);
            }
        }
        table.signals.push(out);
    }
    table
}

fn eval_row<L: Logic>(
    run: &MasRun,
    op: &Op,
    table: &Table<L>,
    span: Span,
    agent: usize,
    row: &mut [L],
    atom: &(dyn Fn(&LocalExpr, usize, usize) -> L + Sync),
) {
    match op {
        Op::True => row.fill(L::TRUE),
        Op::Atom(e) => {
            for (k, v) in row.iter_mut().enumerate() {
                *v = atom(e, agent, span.t0 + k);
            }
        }
        Op::Not(a) => {
            for (v, x) in row.iter_mut().zip(table.row(*a, agent)) {
                *v = x.not();
            }
        }
        Op::And(a, b) => {
            for (v, (x, y)) in row.iter_mut().zip(table.row(*a, agent).iter().zip(table.row(*b, agent))) {
                *v = x.and(*y);
            }
        }
        Op::Until(i, a, b) => until_row(i, table.row(*a, agent), table.row(*b, agent), span, row),
        Op::Graph { dir, quant, graphs, count, weight, child } => {
            for (k, v) in row.iter_mut().enumerate() {
                let t = span.t0 + k;
                let per_graph = graphs.iter().map(|g| {
                    let snap = run.snapshot(g, t).expect("graph tags validated before evaluation");
                    let children = snap
                        .adjacent(agent, *dir)
                        .iter()
                        .filter(|a| weight.contains(a.weight))
                        .map(|a| table.get(*child, a.other, k));
                    L::count(children, count)
                });
                *v = match quant {
                    Quantifier::Exists => per_graph.fold(L::FALSE, L::or),
                    Quantifier::Forall => per_graph.fold(L::TRUE, L::and),
                };
            }
        }
    }
}

/// Direct scan: `a U_I b` holds at `t` when some `t'` in the window has `b`
/// and `a` holds on all of `t..=t'`.
pub(crate) fn until_row<L: Logic>(i: &TimeInterval, a: &[L], b: &[L], span: Span, row: &mut [L]) {
    for (k, v) in row.iter_mut().enumerate() {
        let t = span.t0 + k;
        let Some((s, e)) = span.window(i, t) else {
            *v = L::FALSE;
            continue;
        };
        let mut prefix = L::TRUE;
        for x in &a[k..s - span.t0] {
            prefix = prefix.and(*x);
        }
        let mut acc = L::FALSE;
        for tp in s..=e {
            let j = tp - span.t0;
            prefix = prefix.and(a[j]);
            if prefix == L::FALSE {
                break;
            }
            acc = acc.or(prefix.and(b[j]));
            if acc == L::TRUE {
                break;
            }
        }
        *v = acc;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum GOp {
    True,
    Atom(GlobalExpr),
    /// Root signal of `programs[p]` at an agent.
    Bind(usize, usize),
    Not(usize),
    And(usize, usize),
    Until(TimeInterval, usize, usize),
}

/// A system-level formula lowered to core operators over shared local programs.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct GlobalProgram {
    pub ops: Vec<GOp>,
    pub root: usize,
    pub programs: Vec<(LocalFormula, Program)>,
}

impl GlobalProgram {
    pub fn compile(f: &GlobalFormula) -> Self {
        let mut g = GlobalProgram { ops: Vec::new(), root: 0, programs: Vec::new() };
        g.root = g.lower(f);
        g
    }

    fn program(&mut self, f: &LocalFormula) -> usize {
        if let Some(k) = self.programs.iter().position(|(g, _)| g == f) {
            return k;
        }
        self.programs.push((f.clone(), Program::compile(f)));
        self.programs.len() - 1
    }

    fn push(&mut self, op: GOp) -> usize {
        self.ops.push(op);
        self.ops.len() - 1
    }

    fn or(&mut self, a: usize, b: usize) -> usize {
        let na = self.push(GOp::Not(a));
        let nb = self.push(GOp::Not(b));
        let and = self.push(GOp::And(na, nb));
        self.push(GOp::Not(and))
    }

    fn lower(&mut self, f: &GlobalFormula) -> usize {
        use GlobalFormula::*;
        match f {
            True => self.push(GOp::True),
            Atom(e) => self.push(GOp::Atom(e.clone())),
            Bind(i, phi) => {
                let p = self.program(phi);
                self.push(GOp::Bind(p, *i))
            }
            ForAll(v, phi) => {
                let p = self.program(phi);
                let binds: Vec<usize> = v.iter().map(|&i| self.push(GOp::Bind(p, i))).collect();
                match binds.into_iter().reduce(|a, b| self.push(GOp::And(a, b))) {
                    Some(r) => r,
                    None => self.push(GOp::True),
                }
            }
            Exists(v, phi) => {
                let p = self.program(phi);
                let binds: Vec<usize> = v.iter().map(|&i| self.push(GOp::Bind(p, i))).collect();
                match binds.into_iter().reduce(|a, b| self.or(a, b)) {
                    Some(r) => r,
                    None => {
                        let t = self.push(GOp::True);
                        self.push(GOp::Not(t))
                    }
                }
            }
            Not(a) => {
                let a = self.lower(a);
                self.push(GOp::Not(a))
            }
            And(a, b) => {
                let a = self.lower(a);
                let b = self.lower(b);
                self.push(GOp::And(a, b))
            }
            Or(a, b) => {
                let a = self.lower(a);
                let b = self.lower(b);
                self.or(a, b)
            }
            Implies(a, b) => {
                let a = self.lower(a);
                let na = self.push(GOp::Not(a));
                let b = self.lower(b);
                self.or(na, b)
            }
            Until(i, a, b) => {
                let a = self.lower(a);
                let b = self.lower(b);
                self.push(GOp::Until(*i, a, b))
            }
            Eventually(i, a) => {
                let t = self.push(GOp::True);
                let a = self.lower(a);
                self.push(GOp::Until(*i, t, a))
            }
            Always(i, a) => {
                let t = self.push(GOp::True);
                let a = self.lower(a);
                let na = self.push(GOp::Not(a));
                let u = self.push(GOp::Until(*i, t, na));
                self.push(GOp::Not(u))
            }
        }
    }

    pub fn validate(&self, run: &MasRun) -> Result<()> {
        let n = run.num_agents();
        let check_agent = |agent: usize| {
            if agent == 0 || agent > n {
                Err(Error::AgentOutOfRange { agent, num_agents: n })
            } else {
                Ok(())
            }
        };
        for op in &self.ops {
            match op {
                GOp::Bind(_, i) => check_agent(*i)?,
                GOp::Atom(e) => {
                    for v in e.vars() {
                        check_agent(v.agent)?;
                    }
                    check_components(e.vars().into_iter().map(|v| v.component), run)?;
                }
                _ => {}
            }
        }
        for (_, p) in &self.programs {
            p.validate(run)?;
        }
        Ok(())
    }

    /// Boolean root signal over `span`.
    pub fn evaluate(&self, run: &MasRun, span: Span, parallel: bool) -> Vec<bool> {
        let atom = |e: &LocalExpr, agent: usize, t: usize| e.eval_state(run.state(agent, t)) >= 0.0;
        let tables: Vec<Table<bool>> = self
            .programs
            .iter()
            .map(|(_, p)| evaluate(run, p, span, parallel, &atom))
            .collect();
        let len = span.len();
        let mut sig: Vec<Vec<bool>> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let row: Vec<bool> = match op {
                GOp::True => vec![true; len],
                GOp::Atom(e) => (0..len)
                    .map(|k| {
                        let t = span.t0 + k;
                        e.eval(&|v| run.state(v.agent, t)[v.component]) >= 0.0
                    })
                    .collect(),
                GOp::Bind(p, i) => tables[*p].row(self.programs[*p].1.root, *i).to_vec(),
                GOp::Not(a) => sig[*a].iter().map(|x| !x).collect(),
                GOp::And(a, b) => sig[*a].iter().zip(&sig[*b]).map(|(x, y)| *x && *y).collect(),
                GOp::Until(i, a, b) => {
                    let mut row = vec![false; len];
                    until_row(i, &sig[*a], &sig[*b], span, &mut row);
                    row
                }
            };
            sig.push(row);
        }
        sig.swap_remove(self.root)
    }
}

/// Describes the first bounded temporal operator whose window, for a root
/// needed up to `t1`, reaches past the last sample `length`.
pub(crate) fn strict_overrun(f: &LocalFormula, t1: usize, length: usize) -> Option<String> {
    use LocalFormula::*;
    match f {
        True | Atom(_) => None,
        Not(a) => strict_overrun(a, t1, length),
        Graph(op) => strict_overrun(&op.child, t1, length),
        And(a, b) | Or(a, b) | Implies(a, b) => strict_overrun(a, t1, length).or_else(|| strict_overrun(b, t1, length)),
        Until(i, a, b) => overrun(i, t1, length).or_else(|| {
            let need = child_need(i, t1, length);
            strict_overrun(a, need, length).or_else(|| strict_overrun(b, need, length))
        }),
        Eventually(i, a) | Always(i, a) => {
            overrun(i, t1, length).or_else(|| strict_overrun(a, child_need(i, t1, length), length))
        }
    }
}

pub(crate) fn strict_overrun_global(f: &GlobalFormula, t1: usize, length: usize) -> Option<String> {
    use GlobalFormula::*;
    match f {
        True | Atom(_) => None,
        Bind(_, phi) | ForAll(_, phi) | Exists(_, phi) => strict_overrun(phi, t1, length),
        Not(a) => strict_overrun_global(a, t1, length),
        And(a, b) | Or(a, b) | Implies(a, b) => {
            strict_overrun_global(a, t1, length).or_else(|| strict_overrun_global(b, t1, length))
        }
        Until(i, a, b) => overrun(i, t1, length).or_else(|| {
            let need = child_need(i, t1, length);
            strict_overrun_global(a, need, length).or_else(|| strict_overrun_global(b, need, length))
        }),
        Eventually(i, a) | Always(i, a) => {
            overrun(i, t1, length).or_else(|| strict_overrun_global(a, child_need(i, t1, length), length))
        }
    }
}

/// Latest time an operand is needed at; unbounded windows stop at the trace end.
fn child_need(i: &TimeInterval, need: usize, length: usize) -> usize {
    match i.hi() {
        Bound::Finite(b) => need.saturating_add(b as usize),
        Bound::Infinite => length,
    }
}

fn overrun(i: &TimeInterval, need: usize, length: usize) -> Option<String> {
    match i.hi() {
        Bound::Finite(b) if need.saturating_add(b as usize) > length => Some(format!(
            "interval {i} at t = {need} needs samples up to {} but the trace ends at {length}",
            need.saturating_add(b as usize)
        )),
        _ => None,
    }
}
