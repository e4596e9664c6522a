//! Agents, state trajectories and time-varying multigraphs.
//!
//! Agents are numbered `1..=N`. Time is discrete with samples `0..=L`, where
//! `L` is the *length* of the run (the last valid index). All types here are
//! immutable once built.

mod graph;
mod trajectory;

use std::collections::BTreeSet;

pub use graph::{Adjacent, Edge, GraphSeries, GraphTrajectory, MultigraphSnapshot};
pub use trajectory::MasTrajectory;

use crate::error::{Error, Result};
use crate::formula::WeightInterval;

/// Direction of a graph operator: edges into the agent or out of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    In,
    Out,
}

/// An edge triple `(src, dst, u)` as seen from a neighbor query.
///
/// For `In` queries on agent `i` the triple reads `(j, i, u)`, for `Out`
/// queries `(i, j, u)`; undirected edges are reported in the orientation of
/// the query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeTriple {
    pub src: usize,
    pub dst: usize,
    pub index: u32,
}

/// A multi-agent run: the state trajectory together with every graph type.
#[derive(Clone, Debug, PartialEq)]
pub struct MasRun {
    trajectory: MasTrajectory,
    graphs: GraphTrajectory,
}

impl MasRun {
    pub fn new(trajectory: MasTrajectory, graphs: GraphTrajectory) -> Result<Self> {
        graphs.validate(trajectory.num_agents(), trajectory.length())?;
        Ok(Self { trajectory, graphs })
    }

    pub fn trajectory(&self) -> &MasTrajectory {
        &self.trajectory
    }

    pub fn graphs(&self) -> &GraphTrajectory {
        &self.graphs
    }

    pub fn num_agents(&self) -> usize {
        self.trajectory.num_agents()
    }

    pub fn state_dim(&self) -> usize {
        self.trajectory.state_dim()
    }

    /// Last valid time index `L`.
    pub fn length(&self) -> usize {
        self.trajectory.length()
    }

    pub fn state(&self, agent: usize, t: usize) -> &[f64] {
        self.trajectory.state(agent, t)
    }

    pub fn snapshot(&self, graph_type: &str, t: usize) -> Result<&MultigraphSnapshot> {
        if t > self.length() {
            return Err(Error::TimeOutOfRange { t, length: self.length() });
        }
        self.graphs.snapshot(graph_type, t)
    }

    fn check_agent(&self, agent: usize) -> Result<()> {
        if agent == 0 || agent > self.num_agents() {
            return Err(Error::AgentOutOfRange { agent, num_agents: self.num_agents() });
        }
        Ok(())
    }

    /// Edge triples incident to `agent` in direction `dir` whose weight lies in `weights`.
    pub fn neighbors(
        &self,
        graph_type: &str,
        t: usize,
        agent: usize,
        dir: Direction,
        weights: &WeightInterval,
    ) -> Result<Vec<EdgeTriple>> {
        self.check_agent(agent)?;
        let snap = self.snapshot(graph_type, t)?;
        Ok(snap
            .adjacent(agent, dir)
            .iter()
            .filter(|a| weights.contains(a.weight))
            .map(|a| match dir {
                Direction::In => EdgeTriple { src: a.other, dst: agent, index: a.index },
                Direction::Out => EdgeTriple { src: agent, dst: a.other, index: a.index },
            })
            .collect())
    }

    /// Agents at the opposite end of [`MasRun::neighbors`], parallel edges collapsed.
    pub fn agent_neighbors(
        &self,
        graph_type: &str,
        t: usize,
        agent: usize,
        dir: Direction,
        weights: &WeightInterval,
    ) -> Result<BTreeSet<usize>> {
        self.check_agent(agent)?;
        let snap = self.snapshot(graph_type, t)?;
        Ok(snap
            .adjacent(agent, dir)
            .iter()
            .filter(|a| weights.contains(a.weight))
            .map(|a| a.other)
            .collect())
    }

    /// Union of [`MasRun::agent_neighbors`] over a set of agents.
    pub fn agent_set_neighbors<'a>(
        &self,
        graph_type: &str,
        t: usize,
        agents: impl IntoIterator<Item = &'a usize>,
        dir: Direction,
        weights: &WeightInterval,
    ) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for &a in agents {
            out.extend(self.agent_neighbors(graph_type, t, a, dir, weights)?);
        }
        Ok(out)
    }

    /// A copy of this run with an extra (or replaced) graph type.
    pub fn with_graph(&self, graph_type: impl Into<String>, series: GraphSeries) -> Result<Self> {
        let mut graphs = self.graphs.clone();
        graphs.insert(graph_type, series);
        Self::new(self.trajectory.clone(), graphs)
    }

    /// The sub-run on samples `start..=end`, re-indexed to start at 0.
    pub fn window(&self, start: usize, end: usize) -> Result<Self> {
        if start > end || end > self.length() {
            return Err(Error::TimeOutOfRange { t: end, length: self.length() });
        }
        Self::new(self.trajectory.window(start, end), self.graphs.window(start, end))
    }
}


#[cfg(test)]
pub(crate) use tests::seven_agent_edges;
