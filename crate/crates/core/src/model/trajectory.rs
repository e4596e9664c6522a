use crate::error::{Error, Result};

/// Discrete-time states of `N` homogeneous agents, each in `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MasTrajectory {
    num_agents: usize,
    state_dim: usize,
    length: usize,
    // row-major [t][agent-1][k]
    data: Vec<f64>,
}

impl MasTrajectory {
    /// Builds a trajectory from `states[t][agent - 1][k]`.
    pub fn new(num_agents: usize, state_dim: usize, states: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if num_agents == 0 {
            return Err(Error::model("a run needs at least one agent"));
        }
        if state_dim == 0 {
            return Err(Error::model("state dimension must be positive"));
        }
        if states.is_empty() {
            return Err(Error::model("trajectory has no samples"));
        }
        let length = states.len() - 1;
        let mut data = Vec::with_capacity(states.len() * num_agents * state_dim);
        for (t, row) in states.into_iter().enumerate() {
            if row.len() != num_agents {
                return Err(Error::model(format!(
                    "sample t = {t} has {} agents, expected {num_agents}",
                    row.len()
                )));
            }
            for (i, x) in row.into_iter().enumerate() {
                if x.len() != state_dim {
                    return Err(Error::model(format!(
                        "state of agent {} at t = {t} has dimension {}, expected {state_dim}",
                        i + 1,
                        x.len()
                    )));
                }
                if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
                    return Err(Error::model(format!(
                        "state of agent {} at t = {t} has non-finite component {bad}",
                        i + 1
                    )));
                }
                data.extend(x);
            }
        }
        Ok(Self { num_agents, state_dim, length, data })
    }

    /// Builds a trajectory by calling `f(agent, t)` for every agent and sample `0..=length`.
    pub fn from_fn(
        num_agents: usize,
        state_dim: usize,
        length: usize,
        mut f: impl FnMut(usize, usize) -> Vec<f64>,
    ) -> Result<Self> {
        let states = (0..=length)
            .map(|t| (1..=num_agents).map(|i| f(i, t)).collect())
            .collect();
        Self::new(num_agents, state_dim, states)
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// State of `agent` (1-based) at time `t`.
    ///
    /// Panics when either index is out of range.
    pub fn state(&self, agent: usize, t: usize) -> &[f64] {
        assert!(agent >= 1 && agent <= self.num_agents, "agent {agent} out of range");
        assert!(t <= self.length, "time {t} out of range");
        let start = (t * self.num_agents + agent - 1) * self.state_dim;
        &self.data[start..start + self.state_dim]
    }

    /// `states[t][agent - 1]`, the inverse of [`MasTrajectory::new`].
    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..=self.length)
            .map(|t| (1..=self.num_agents).map(|i| self.state(i, t).to_vec()).collect())
            .collect()
    }

    pub(crate) fn window(&self, start: usize, end: usize) -> Self {
        let row = self.num_agents * self.state_dim;
        Self {
            num_agents: self.num_agents,
            state_dim: self.state_dim,
            length: end - start,
            data: self.data[start * row..(end + 1) * row].to_vec(),
        }
    }
}
