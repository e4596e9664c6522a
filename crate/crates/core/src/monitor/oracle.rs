//! Direct recursive transcription of the satisfaction relation.
//!
//! Memo-free and exponential in nesting depth; meant for small instances
//! as an independent reference for the monitors. Graph operators walk the
//! raw edge list of each snapshot rather than the adjacency index.

use crate::error::{Error, Result};
use crate::formula::{Direction, GlobalFormula, GraphOp, LocalFormula, Quantifier, TimeInterval};
use crate::model::MasRun;

/// Whether `agent` satisfies `f` at time `t`.
pub fn oracle_eval(run: &MasRun, f: &LocalFormula, agent: usize, t: usize) -> Result<bool> {
    if agent == 0 || agent > run.num_agents() {
        return Err(Error::AgentOutOfRange { agent, num_agents: run.num_agents() });
    }
    if t > run.length() {
        return Err(Error::TimeOutOfRange { t, length: run.length() });
    }
    local(run, f, agent, t)
}

/// Whether the system satisfies `f` at time `t`.
pub fn oracle_eval_global(run: &MasRun, f: &GlobalFormula, t: usize) -> Result<bool> {
    if t > run.length() {
        return Err(Error::TimeOutOfRange { t, length: run.length() });
    }
    global(run, f, t)
}

/// Samples `t'` in `(t + I) ∩ {0..=L}`, unbounded intervals stopping at `L`.
fn window(i: &TimeInterval, t: usize, length: usize) -> Vec<usize> {
    let lo = t + i.lo() as usize;
    match i.hi().finite() {
        Some(hi) => (lo..=(t + hi as usize).min(length)).collect(),
        None => (lo.min(length)..=length).collect(),
    }
}

fn until<F>(i: &TimeInterval, t: usize, length: usize, mut a: F, mut b: impl FnMut(usize) -> Result<bool>) -> Result<bool>
where
    F: FnMut(usize) -> Result<bool>,
{
    for tp in window(i, t, length) {
        if b(tp)? {
            let mut all = true;
            for k in t..=tp {
                if !a(k)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn local(run: &MasRun, f: &LocalFormula, i: usize, t: usize) -> Result<bool> {
    use LocalFormula::*;
    let len = run.length();
    Ok(match f {
        True => true,
        Atom(e) => {
            let x = run.state(i, t);
            if let Some(c) = e.vars().into_iter().find(|c| c.0 >= x.len()) {
                return Err(Error::ComponentOutOfRange { component: c.0, state_dim: x.len() });
            }
            e.eval_state(x) >= 0.0
        }
        Not(a) => !local(run, a, i, t)?,
        And(a, b) => local(run, a, i, t)? && local(run, b, i, t)?,
        Or(a, b) => local(run, a, i, t)? || local(run, b, i, t)?,
        Implies(a, b) => !local(run, a, i, t)? || local(run, b, i, t)?,
        Until(iv, a, b) => until(iv, t, len, |k| local(run, a, i, k), |k| local(run, b, i, k))?,
        Eventually(iv, a) => {
            let mut any = false;
            for k in window(iv, t, len) {
                if local(run, a, i, k)? {
                    any = true;
                    break;
                }
            }
            any
        }
        Always(iv, a) => {
            let mut all = true;
            for k in window(iv, t, len) {
                if !local(run, a, i, k)? {
                    all = false;
                    break;
                }
            }
            all
        }
        Graph(op) => graph(run, op, i, t)?,
    })
}

fn graph(run: &MasRun, op: &GraphOp, i: usize, t: usize) -> Result<bool> {
    let mut results = Vec::with_capacity(op.graphs.len());
    for g in &op.graphs {
        let snap = run.snapshot(g, t)?;
        let mut count = 0u64;
        for e in snap.edges() {
            // undirected edges are stored once; consider both orientations,
            // but a self-loop only once
            let mut ends = vec![(e.src, e.dst)];
            if !snap.is_directed() && e.src != e.dst {
                ends.push((e.dst, e.src));
            }
            for (src, dst) in ends {
                let other = match op.dir {
                    Direction::In if dst == i => src,
                    Direction::Out if src == i => dst,
                    _ => continue,
                };
                if op.weight.contains(e.weight) && local(run, &op.child, other, t)? {
                    count += 1;
                }
            }
        }
        results.push(op.count.contains(count));
    }
    Ok(match op.quant {
        Quantifier::Exists => results.iter().any(|r| *r),
        Quantifier::Forall => results.iter().all(|r| *r),
    })
}

fn global(run: &MasRun, f: &GlobalFormula, t: usize) -> Result<bool> {
    use GlobalFormula::*;
    let len = run.length();
    let bind = |i: usize, phi: &LocalFormula| oracle_eval(run, phi, i, t);
    Ok(match f {
        True => true,
        Atom(e) => {
            for v in e.vars() {
                if v.agent == 0 || v.agent > run.num_agents() {
                    return Err(Error::AgentOutOfRange { agent: v.agent, num_agents: run.num_agents() });
                }
                if v.component >= run.state_dim() {
                    return Err(Error::ComponentOutOfRange { component: v.component, state_dim: run.state_dim() });
                }
            }
            e.eval(&|v| run.state(v.agent, t)[v.component]) >= 0.0
        }
        Bind(i, phi) => bind(*i, phi)?,
        ForAll(v, phi) => {
            let mut all = true;
            for &i in v {
                all &= bind(i, phi)?;
            }
            all
        }
        Exists(v, phi) => {
            let mut any = false;
            for &i in v {
                any |= bind(i, phi)?;
            }
            any
        }
        Not(a) => !global(run, a, t)?,
        And(a, b) => global(run, a, t)? && global(run, b, t)?,
        Or(a, b) => global(run, a, t)? || global(run, b, t)?,
        Implies(a, b) => !global(run, a, t)? || global(run, b, t)?,
        Until(iv, a, b) => until(iv, t, len, |k| global(run, a, k), |k| global(run, b, k))?,
        Eventually(iv, a) => {
            let mut any = false;
            for k in window(iv, t, len) {
                any |= global(run, a, k)?;
            }
            any
        }
        Always(iv, a) => {
            let mut all = true;
            for k in window(iv, t, len) {
                all &= global(run, a, k)?;
            }
            all
        }
    })
}
