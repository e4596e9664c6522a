//! Sufficient conditions under which an observer's three-valued monitor
//! never answers `?`.
//!
//! The formula is split into its graph operator tree. A leaf `q` below
//! operators `p1, ..., pr` is harmless at a time `τ` of `p1` when either
//!
//! * every state the leaf can read through the chain is known: starting at
//!   the subject at `τ`, each operator moves to its neighbors and each path
//!   segment moves time by its offset window; the leaf then reads its atoms
//!   over its own horizon; or
//! * `p1` is false at the subject regardless of any state: with `p1 ... pr`
//!   joined by conjunctions only, an agent can make `ps` non-false only if
//!   the edges to agents that can make `p(s+1)` non-false number at least
//!   the smallest admissible count of `ps`.
//!
//! The subject's signal on `0..=T` reads top-level items (first operators
//! and graph-free leaves) only at times their path segment reaches, and a
//! top-level operator's value is known once all of its leaves are harmless,
//! or once one of them proves it false. The check is therefore sound for
//! the three-valued monitor of the same formula.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{expand_graph_quantifier, Bound, GraphOpTree, LeafNode, LocalFormula, Segment};
use crate::model::MasRun;

use super::KnowledgeMask;

/// A leaf that neither condition covers at time `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeafFailure {
    /// 1-based leaf index in the operator tree.
    pub leaf: usize,
    /// Time at which the leaf's top-level item is evaluated.
    pub t: usize,
}

impl fmt::Display for LeafFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "leaf {} at t = {}", self.leaf, self.t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminabilityReport {
    pub determinable: bool,
    /// Operator tree of the analyzed (graph-expanded) formula.
    pub tree: GraphOpTree,
    /// Number of (leaf, time) pairs examined.
    pub checked: usize,
    /// (leaf, time) pairs passing by known states alone.
    pub by_knowledge: usize,
    /// (leaf, time) pairs passing by the neighbor-count bound alone.
    pub by_count: usize,
    pub failures: Vec<LeafFailure>,
}

/// Whether `mask`'s observer can determine `f` at `subject` on `0..=t`.
///
/// Graph operators over several graphs are expanded first; this does not
/// change three-valued verdicts.
pub fn is_determinable(
    run: &MasRun,
    mask: &KnowledgeMask,
    f: &LocalFormula,
    subject: usize,
    t: usize,
) -> Result<DeterminabilityReport> {
    mask.check_run(run)?;
    if subject == 0 || subject > run.num_agents() {
        return Err(Error::AgentOutOfRange { agent: subject, num_agents: run.num_agents() });
    }
    if t > run.length() {
        return Err(Error::TimeOutOfRange { t, length: run.length() });
    }
    let tree = GraphOpTree::build(&expand_graph_quantifier(f))?;
    for node in tree.nodes() {
        if !run.graphs().contains(&node.graph) {
            return Err(Error::UnknownGraphType(node.graph.clone()));
        }
    }
    let ctx = Context { run, mask, tree: &tree, length: run.length() };
    let mut report = DeterminabilityReport {
        determinable: true,
        tree: tree.clone(),
        checked: 0,
        by_knowledge: 0,
        by_count: 0,
        failures: Vec::new(),
    };
    for leaf in tree.leaves() {
        let top = match leaf.ancestors.first() {
            Some(&p1) => tree.node(p1).segment,
            None => leaf.segment,
        };
        let Some((lo, hi)) = reach(top, 0, t, ctx.length) else { continue };
        let conjunctive = leaf.ancestors.iter().skip(1).all(|&p| tree.node(p).segment.conjunctive);
        for tau in lo..=hi {
            report.checked += 1;
            let known = ctx.reads_known(leaf, subject, tau);
            let bounded = conjunctive && !leaf.ancestors.is_empty() && !ctx.possible(leaf, subject, tau);
            match (known, bounded) {
                (true, false) => report.by_knowledge += 1,
                (false, true) => report.by_count += 1,
                (true, true) => {}
                (false, false) => report.failures.push(LeafFailure { leaf: leaf.index, t: tau }),
            }
        }
    }
    report.determinable = report.failures.is_empty();
    Ok(report)
}

/// Times a segment reaches from origins `t0..=t1`, clipped to `0..=length`.
fn reach(seg: Segment, t0: usize, t1: usize, length: usize) -> Option<(usize, usize)> {
    let (lo, _) = seg.times(t0, length)?;
    let (_, hi) = seg.times(t1, length).unwrap_or((lo, length));
    (lo <= hi).then_some((lo, hi))
}

struct Context<'a> {
    run: &'a MasRun,
    mask: &'a KnowledgeMask,
    tree: &'a GraphOpTree,
    length: usize,
}

impl Context<'_> {
    /// Condition on known states: every (agent, time) the leaf can read
    /// through its chain from the subject at `tau`.
    fn reads_known(&self, leaf: &LeafNode, subject: usize, tau: usize) -> bool {
        if !leaf.formula.has_atoms() {
            return true;
        }
        let n = self.run.num_agents();
        let width = self.length + 1;
        // grid[(agent - 1) * width + t]: the item at this level is evaluated there
        let mut grid = vec![false; n * width];
        grid[(subject - 1) * width + tau] = true;
        for (s, &p) in leaf.ancestors.iter().enumerate() {
            let node = self.tree.node(p);
            if s > 0 {
                grid = self.shift(&grid, node.segment);
            }
            let mut next = vec![false; n * width];
            for a in 1..=n {
                for t in 0..width {
                    if !grid[(a - 1) * width + t] {
                        continue;
                    }
                    let snap = self.run.snapshot(&node.graph, t).expect("graph tags checked");
                    for adj in snap.adjacent(a, node.dir) {
                        if node.weight.contains(adj.weight) {
                            next[(adj.other - 1) * width + t] = true;
                        }
                    }
                }
            }
            grid = next;
        }
        if !leaf.ancestors.is_empty() {
            grid = self.shift(&grid, leaf.segment);
        }
        let span = leaf.formula.horizon().end;
        for a in 1..=n {
            for t in 0..width {
                if grid[(a - 1) * width + t] {
                    let end = match span {
                        Bound::Finite(h) => t.saturating_add(h as usize).min(self.length),
                        Bound::Infinite => self.length,
                    };
                    if (t..=end).any(|r| !self.mask.known(a, r)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn shift(&self, grid: &[bool], seg: Segment) -> Vec<bool> {
        let n = self.run.num_agents();
        let width = self.length + 1;
        let mut out = vec![false; n * width];
        for a in 0..n {
            for t in 0..width {
                if grid[a * width + t] {
                    if let Some((lo, hi)) = seg.times(t, self.length) {
                        out[a * width + lo..=a * width + hi].fill(true);
                    }
                }
            }
        }
        out
    }

    /// Whether `p1` could be anything but false at the subject at `tau`,
    /// counting edges only towards agents whose next operator could be.
    fn possible(&self, leaf: &LeafNode, subject: usize, tau: usize) -> bool {
        let n = self.run.num_agents();
        // below the last operator the leaf may take any value
        let mut below = vec![true; n + 1];
        for &p in leaf.ancestors.iter().rev() {
            let node = self.tree.node(p);
            let need = node.count.min();
            let snap = self.run.snapshot(&node.graph, tau).expect("graph tags checked");
            let mut here = vec![false; n + 1];
            for (a, slot) in here.iter_mut().enumerate().skip(1) {
                let Some(need) = need else { continue };
                let count = snap
                    .adjacent(a, node.dir)
                    .iter()
                    .filter(|adj| node.weight.contains(adj.weight) && below[adj.other])
                    .count() as u64;
                *slot = count >= need;
            }
            below = here;
        }
        below[subject]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{CountSet, Direction, LocalExpr, WeightInterval};
    use crate::model::{Edge, GraphSeries, GraphTrajectory, MasTrajectory, MultigraphSnapshot};

    fn star(in_neighbors: usize) -> MasRun {
        let n = in_neighbors + 1;
        let traj = MasTrajectory::from_fn(n, 1, 2, |i, _| vec![i as f64]).unwrap();
        let edges = (2..=n).map(|j| Edge::new(j, 1, 1, 1.0));
        let mut g = GraphTrajectory::default();
        g.insert("c", GraphSeries::Static(MultigraphSnapshot::new(true, edges).unwrap()));
        MasRun::new(traj, g).unwrap()
    }

    fn at_least_two() -> LocalFormula {
        LocalFormula::graph(
            Direction::In,
            "c",
            CountSet::at_least(2),
            WeightInterval::ALL,
            LocalFormula::atom(LocalExpr::x(0)),
        )
    }

    #[test]
    fn single_neighbor_is_determinable_by_count() {
        let run = star(1);
        let mask = KnowledgeMask::empty(1, 2, 2).unwrap();
        let r = is_determinable(&run, &mask, &at_least_two(), 1, 2).unwrap();
        assert!(r.determinable);
        assert_eq!(r.by_count, 3);
    }

    #[test]
    fn known_neighbors_are_determinable() {
        let run = star(3);
        let mask = KnowledgeMask::full(1, 4, 2).unwrap();
        let r = is_determinable(&run, &mask, &at_least_two(), 1, 2).unwrap();
        assert!(r.determinable);
        assert_eq!(r.by_knowledge, 3);
    }

    #[test]
    fn one_masked_neighbor_fails() {
        let run = star(3);
        let mask = KnowledgeMask::from_intervals(1, 4, 2, &[(2, 0, 2), (3, 0, 2)]).unwrap();
        let r = is_determinable(&run, &mask, &at_least_two(), 1, 0).unwrap();
        assert!(!r.determinable);
        assert_eq!(r.failures, vec![LeafFailure { leaf: 1, t: 0 }]);
    }
}
