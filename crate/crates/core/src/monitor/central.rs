use super::kernel::{self, GlobalProgram, Program, Span};
use super::{BoolSignal, Signal};
use crate::error::{Error, Result};
use crate::formula::{Bound, GlobalFormula, Horizon, LocalExpr, LocalFormula};
use crate::model::MasRun;

/// Evaluation settings shared by the monitors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MonitorOptions {
    /// Reject formulas whose bounded windows reach past the end of the trace
    /// instead of clamping them.
    pub strict_horizon: bool,
    /// Evaluate agents in parallel on the rayon pool.
    pub parallel: bool,
}

/// Range the signals must be computed over to answer `t0..=t1` exactly:
/// up to `t1 + T` (the formula's horizon end), capped at the trace end.
pub(crate) fn span_for(run: &MasRun, horizon: Horizon, t0: usize, t1: usize) -> Result<Span> {
    let length = run.length();
    if t1 > length {
        return Err(Error::TimeOutOfRange { t: t1, length });
    }
    if t0 > t1 {
        return Err(Error::InvalidFormula(format!("empty monitoring range {t0}..={t1}")));
    }
    let end = match horizon.end {
        Bound::Finite(h) => t1.saturating_add(h as usize).min(length),
        Bound::Infinite => length,
    };
    Ok(Span { t0, end, length })
}

fn check_agent(run: &MasRun, agent: usize) -> Result<()> {
    if agent == 0 || agent > run.num_agents() {
        return Err(Error::AgentOutOfRange { agent, num_agents: run.num_agents() });
    }
    Ok(())
}

/// A local formula compiled once for repeated monitoring.
#[derive(Clone, Debug)]
pub struct LocalMonitor {
    formula: LocalFormula,
    program: Program,
    horizon: Horizon,
}

impl LocalMonitor {
    pub fn new(f: &LocalFormula) -> Self {
        Self { formula: f.clone(), program: Program::compile(f), horizon: f.horizon() }
    }

    pub fn formula(&self) -> &LocalFormula {
        &self.formula
    }

    /// Signals of every agent on `t0..=t1`; `result[i - 1]` belongs to agent `i`.
    pub fn run_all(&self, run: &MasRun, t0: usize, t1: usize, opts: MonitorOptions) -> Result<Vec<BoolSignal>> {
        self.program.validate(run)?;
        if opts.strict_horizon {
            if let Some(msg) = kernel::strict_overrun(&self.formula, t1, run.length()) {
                return Err(Error::InsufficientTrace(msg));
            }
        }
        let span = span_for(run, self.horizon, t0, t1)?;
        let atom = |e: &LocalExpr, agent: usize, t: usize| e.eval_state(run.state(agent, t)) >= 0.0;
        let table = kernel::evaluate(run, &self.program, span, opts.parallel, &atom);
        let n = t1 - t0 + 1;
        Ok((1..=run.num_agents())
            .map(|i| Signal::new(t0, table.row(self.program.root, i)[..n].to_vec()))
            .collect())
    }

    pub fn run(&self, run: &MasRun, agent: usize, t0: usize, t1: usize, opts: MonitorOptions) -> Result<BoolSignal> {
        check_agent(run, agent)?;
        Ok(self.run_all(run, t0, t1, opts)?.swap_remove(agent - 1))
    }
}

/// A system-level formula compiled once for repeated monitoring.
#[derive(Clone, Debug)]
pub struct GlobalMonitor {
    formula: GlobalFormula,
    program: GlobalProgram,
    horizon: Horizon,
}

impl GlobalMonitor {
    pub fn new(f: &GlobalFormula) -> Self {
        Self { formula: f.clone(), program: GlobalProgram::compile(f), horizon: f.horizon() }
    }

    pub fn formula(&self) -> &GlobalFormula {
        &self.formula
    }

    pub fn run(&self, run: &MasRun, t0: usize, t1: usize, opts: MonitorOptions) -> Result<BoolSignal> {
        self.program.validate(run)?;
        if opts.strict_horizon {
            if let Some(msg) = kernel::strict_overrun_global(&self.formula, t1, run.length()) {
                return Err(Error::InsufficientTrace(msg));
            }
        }
        let span = span_for(run, self.horizon, t0, t1)?;
        let mut values = self.program.evaluate(run, span, opts.parallel);
        values.truncate(t1 - t0 + 1);
        Ok(Signal::new(t0, values))
    }
}

/// Satisfaction signal of `f` at `agent` over `0..=t`.
pub fn monitor_local(run: &MasRun, f: &LocalFormula, agent: usize, t: usize) -> Result<BoolSignal> {
    LocalMonitor::new(f).run(run, agent, 0, t, MonitorOptions::default())
}

/// Satisfaction signal of `f` at `agent` over `t0..=t1`.
pub fn monitor_local_with(
    run: &MasRun,
    f: &LocalFormula,
    agent: usize,
    t0: usize,
    t1: usize,
    opts: MonitorOptions,
) -> Result<BoolSignal> {
    LocalMonitor::new(f).run(run, agent, t0, t1, opts)
}

/// Satisfaction signal of a system-level formula over `0..=t`.
pub fn monitor_global(run: &MasRun, f: &GlobalFormula, t: usize) -> Result<BoolSignal> {
    GlobalMonitor::new(f).run(run, 0, t, MonitorOptions::default())
}

/// Satisfaction signal of a system-level formula over `t0..=t1`.
pub fn monitor_global_with(
    run: &MasRun,
    f: &GlobalFormula,
    t0: usize,
    t1: usize,
    opts: MonitorOptions,
) -> Result<BoolSignal> {
    GlobalMonitor::new(f).run(run, t0, t1, opts)
}

/// Signals of every subformula of `f` (after lowering) at every agent.
#[derive(Clone, Debug)]
pub struct SignalTable {
    subformulas: Vec<String>,
    signals: Vec<Vec<BoolSignal>>,
    root: usize,
}

impl SignalTable {
    /// Builds the table over `t0..=t1` plus whatever lookahead the formula needs.
    pub fn build(run: &MasRun, f: &LocalFormula, t0: usize, t1: usize, opts: MonitorOptions) -> Result<Self> {
        let program = Program::compile(f);
        program.validate(run)?;
        let span = span_for(run, f.horizon(), t0, t1)?;
        let atom = |e: &LocalExpr, agent: usize, t: usize| e.eval_state(run.state(agent, t)) >= 0.0;
        let table = kernel::evaluate(run, &program, span, opts.parallel, &atom);
        let subformulas = program.ops.iter().map(describe).collect();
        let signals = (0..program.ops.len())
            .map(|k| (1..=run.num_agents()).map(|i| Signal::new(span.t0, table.row(k, i).to_vec())).collect())
            .collect();
        Ok(Self { subformulas, signals, root: program.root })
    }

    /// Short description of each lowered operator, indexed by subformula id.
    pub fn subformulas(&self) -> &[String] {
        &self.subformulas
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn get(&self, id: usize, agent: usize) -> Option<&BoolSignal> {
        self.signals.get(id)?.get(agent.checked_sub(1)?)
    }
}

fn describe(op: &kernel::Op) -> String {
    use kernel::Op::*;
    match op {
        True => "true".into(),
        Atom(e) => format!("[{e} >= 0]"),
        Not(a) => format!("!#{a}"),
        And(a, b) => format!("#{a} & #{b}"),
        Until(i, a, b) => format!("#{a} U{i} #{b}"),
        Graph { dir, graphs, count, child, .. } => format!("{dir:?}{{{}}} E{count} #{child}", graphs.join(",")),
    }
}
