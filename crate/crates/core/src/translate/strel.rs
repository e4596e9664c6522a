use std::fmt;

use super::graphs::shortest_distances;
use crate::error::{Error, Result};
use crate::formula::WeightInterval;
use crate::model::{Direction, MultigraphSnapshot};

/// A sequence of agents `l0 l1 ...` in which consecutive agents are joined
/// by an edge of the distance graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace(Vec<usize>);

impl Trace {
    pub fn new(agents: Vec<usize>) -> Self {
        assert!(!agents.is_empty(), "a trace has at least one agent");
        Self(agents)
    }

    pub fn agents(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

/// Which distance a trace is measured by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceMode {
    /// Sum of edge weights along the trace.
    Reach,
    /// Shortest distance between the trace's endpoints.
    Escape,
}

/// All simple traces rooted at `i` whose distance lies in `w`, sorted.
///
/// With parallel edges a trace qualifies in reach mode when some choice of
/// edges gives a sum in `w`.
pub fn enumerate_traces(
    g: &MultigraphSnapshot,
    i: usize,
    w: WeightInterval,
    mode: TraceMode,
    num_agents: usize,
) -> Result<Vec<Trace>> {
    if i == 0 || i > num_agents {
        return Err(Error::AgentOutOfRange { agent: i, num_agents });
    }
    let mut out = Vec::new();
    let mut path = vec![i];
    let mut on_path = vec![false; num_agents + 1];
    on_path[i] = true;
    match mode {
        TraceMode::Reach => {
            if let Some(e) = g.edges().iter().find(|e| e.weight <= 0.0) {
                return Err(Error::NonPositiveWeight { src: e.src, dst: e.dst, weight: e.weight });
            }
            reach(g, w, 0.0, &mut path, &mut on_path, &mut out);
        }
        TraceMode::Escape => {
            let dist = shortest_distances(g, i, num_agents)?;
            escape(g, w, &dist, &mut path, &mut on_path, &mut out);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn reach(
    g: &MultigraphSnapshot,
    w: WeightInterval,
    sum: f64,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Trace>,
) {
    if w.contains(sum) {
        out.push(Trace(path.clone()));
    }
    let last = *path.last().expect("path is non-empty");
    for a in g.adjacent(last, Direction::Out) {
        // weights are positive, so sums only grow
        let next = sum + a.weight;
        if a.other >= on_path.len() || on_path[a.other] || next > w.hi() {
            continue;
        }
        on_path[a.other] = true;
        path.push(a.other);
        reach(g, w, next, path, on_path, out);
        path.pop();
        on_path[a.other] = false;
    }
}

fn escape(
    g: &MultigraphSnapshot,
    w: WeightInterval,
    dist: &[f64],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Trace>,
) {
    let last = *path.last().expect("path is non-empty");
    if w.contains(dist[last]) {
        out.push(Trace(path.clone()));
    }
    for a in g.adjacent(last, Direction::Out) {
        if a.other >= on_path.len() || on_path[a.other] {
            continue;
        }
        on_path[a.other] = true;
        path.push(a.other);
        escape(g, w, dist, path, on_path, out);
        path.pop();
        on_path[a.other] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{seven_agent_edges, Edge};

    fn w(lo: f64, hi: f64) -> WeightInterval {
        WeightInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn seven_agent_reach_traces() {
        let g = MultigraphSnapshot::new(false, seven_agent_edges()).unwrap();
        let traces = enumerate_traces(&g, 3, w(0.0, 20.0), TraceMode::Reach, 7).unwrap();
        let got: Vec<String> = traces.iter().map(|t| t.to_string()).collect();
        assert_eq!(got, vec!["3", "3,1", "3,2", "3,4", "3,4,6", "3,5", "3,5,7"]);
        let only_root = enumerate_traces(&g, 3, w(0.0, 0.0), TraceMode::Reach, 7).unwrap();
        assert_eq!(only_root, vec![Trace::new(vec![3])]);
    }

    #[test]
    fn star_reach_with_unit_weights() {
        let g = MultigraphSnapshot::new(false, (2..=4).map(|j| Edge::new(1, j, 1, 1.0))).unwrap();
        let traces = enumerate_traces(&g, 1, w(0.0, 1.0), TraceMode::Reach, 4).unwrap();
        assert_eq!(traces.len(), 4);
    }

    #[test]
    fn reach_rejects_zero_weights() {
        let g = MultigraphSnapshot::new(false, [Edge::new(1, 2, 1, 0.0)]).unwrap();
        assert!(matches!(
            enumerate_traces(&g, 1, w(0.0, 1.0), TraceMode::Reach, 2),
            Err(Error::NonPositiveWeight { .. })
        ));
    }
}
