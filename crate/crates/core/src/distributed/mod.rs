//! Monitoring from one agent's point of view when only part of the other
//! agents' states is available.
//!
//! Verdicts are three-valued: an atom over a masked state is `?`, Boolean
//! and temporal operators follow Kleene's tables, and graph operators count
//! satisfied and not-yet-violated neighbors (see [`count_verdict`]). The
//! monitor is sound: a `1` or `0` agrees with the full-information verdict.

mod determinability;
mod mask;

pub use determinability::{is_determinable, DeterminabilityReport, LeafFailure};
pub use mask::{KnowledgeMask, MaskChange};

pub use crate::monitor::{count_verdict, graph_verdict, TernarySignal, Verdict};

use crate::error::{Error, Result};
use crate::formula::{LocalExpr, LocalFormula};
use crate::model::MasRun;
use crate::monitor::kernel::{self, Program};
use crate::monitor::{span_for, MonitorOptions, Signal};

/// The observer's three-valued signal of `f` at `subject` over `0..=t`.
pub fn monitor_dist(
    run: &MasRun,
    mask: &KnowledgeMask,
    f: &LocalFormula,
    subject: usize,
    t: usize,
) -> Result<TernarySignal> {
    monitor_dist_with(run, mask, f, subject, 0, t, MonitorOptions::default())
}

/// As [`monitor_dist`] over `t0..=t1`.
pub fn monitor_dist_with(
    run: &MasRun,
    mask: &KnowledgeMask,
    f: &LocalFormula,
    subject: usize,
    t0: usize,
    t1: usize,
    opts: MonitorOptions,
) -> Result<TernarySignal> {
    Ok(monitor_dist_all(run, mask, f, t0, t1, opts)?.swap_remove(subject_index(run, subject)?))
}

/// As [`monitor_dist`], after checking the mask belongs to `observer`.
pub fn monitor_dist_as(
    run: &MasRun,
    observer: usize,
    mask: &KnowledgeMask,
    f: &LocalFormula,
    subject: usize,
    t: usize,
) -> Result<TernarySignal> {
    mask.check_observer(observer)?;
    monitor_dist(run, mask, f, subject, t)
}

/// The observer's signals at every subject; `result[j - 1]` belongs to agent `j`.
pub fn monitor_dist_all(
    run: &MasRun,
    mask: &KnowledgeMask,
    f: &LocalFormula,
    t0: usize,
    t1: usize,
    opts: MonitorOptions,
) -> Result<Vec<TernarySignal>> {
    mask.check_run(run)?;
    let program = Program::compile(f);
    program.validate(run)?;
    if opts.strict_horizon {
        if let Some(msg) = kernel::strict_overrun(f, t1, run.length()) {
            return Err(Error::InsufficientTrace(msg));
        }
    }
    let span = span_for(run, f.horizon(), t0, t1)?;
    let atom = |e: &LocalExpr, agent: usize, t: usize| {
        if mask.known(agent, t) {
            Verdict::from(e.eval_state(run.state(agent, t)) >= 0.0)
        } else {
            Verdict::Unknown
        }
    };
    let table = kernel::evaluate(run, &program, span, opts.parallel, &atom);
    let n = t1 - t0 + 1;
    Ok((1..=run.num_agents())
        .map(|j| Signal::new(t0, table.row(program.root, j)[..n].to_vec()))
        .collect())
}

fn subject_index(run: &MasRun, subject: usize) -> Result<usize> {
    if subject == 0 || subject > run.num_agents() {
        return Err(Error::AgentOutOfRange { agent: subject, num_agents: run.num_agents() });
    }
    Ok(subject - 1)
}
