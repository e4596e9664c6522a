use std::collections::{BTreeMap, HashSet};

use super::Direction;
use crate::error::{Error, Result};

/// A weighted multigraph edge `(src, dst, u)` with weight `w`.
///
/// Weights may be infinite but never NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub index: u32,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, index: u32, weight: f64) -> Self {
        Self { src, dst, index, weight }
    }
}

/// One end of an edge, stored in a per-agent adjacency list.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Adjacent {
    pub other: usize,
    pub index: u32,
    pub weight: f64,
}

/// A multigraph at one time instant.
///
/// Undirected edges are stored once with `src <= dst` and mirrored when
/// queried. Self-loops are allowed and count as a single edge.
#[derive(Clone, Debug)]
pub struct MultigraphSnapshot {
    directed: bool,
    edges: Vec<Edge>,
    incoming: Vec<Vec<Adjacent>>,
    outgoing: Vec<Vec<Adjacent>>,
}

impl PartialEq for MultigraphSnapshot {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed && self.edges == other.edges
    }
}

impl MultigraphSnapshot {
    pub fn new(directed: bool, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut stored = Vec::new();
        for mut e in edges {
            if e.weight.is_nan() {
                return Err(Error::model(format!("edge ({}, {}, {}) has NaN weight", e.src, e.dst, e.index)));
            }
            if e.src == 0 || e.dst == 0 {
                return Err(Error::model("agent ids are 1-based; found 0 in an edge"));
            }
            if e.index == 0 {
                return Err(Error::model("edge indices are positive"));
            }
            if !directed && e.src > e.dst {
                std::mem::swap(&mut e.src, &mut e.dst);
            }
            if !seen.insert((e.src, e.dst, e.index)) {
                return Err(Error::model(format!("duplicate edge ({}, {}, {})", e.src, e.dst, e.index)));
            }
            stored.push(e);
        }
        stored.sort_by_key(|e| (e.src, e.dst, e.index));

        let size = stored.iter().map(|e| e.src.max(e.dst)).max().unwrap_or(0) + 1;
        let mut incoming = vec![Vec::new(); size];
        let mut outgoing = vec![Vec::new(); size];
        for e in &stored {
            outgoing[e.src].push(Adjacent { other: e.dst, index: e.index, weight: e.weight });
            incoming[e.dst].push(Adjacent { other: e.src, index: e.index, weight: e.weight });
            if !directed && e.src != e.dst {
                outgoing[e.dst].push(Adjacent { other: e.src, index: e.index, weight: e.weight });
                incoming[e.src].push(Adjacent { other: e.dst, index: e.index, weight: e.weight });
            }
        }
        Ok(Self { directed, edges: stored, incoming, outgoing })
    }

    pub fn empty(directed: bool) -> Self {
        Self::new(directed, []).expect("empty graph is valid")
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Stored edges; undirected edges appear once in canonical orientation.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn adjacent(&self, agent: usize, dir: Direction) -> &[Adjacent] {
        let lists = match dir {
            Direction::In => &self.incoming,
            Direction::Out => &self.outgoing,
        };
        lists.get(agent).map(Vec::as_slice).unwrap_or(&[])
    }

    fn max_agent(&self) -> usize {
        self.edges.iter().map(|e| e.src.max(e.dst)).max().unwrap_or(0)
    }
}

/// The evolution of one graph type over time.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSeries {
    /// One snapshot valid at every time.
    Static(MultigraphSnapshot),
    /// One snapshot per sample `0..=L`.
    Timed(Vec<MultigraphSnapshot>),
}

impl GraphSeries {
    pub fn at(&self, t: usize) -> Option<&MultigraphSnapshot> {
        match self {
            GraphSeries::Static(s) => Some(s),
            GraphSeries::Timed(v) => v.get(t),
        }
    }

    pub fn is_directed(&self) -> bool {
        match self {
            GraphSeries::Static(s) => s.is_directed(),
            GraphSeries::Timed(v) => v.first().is_some_and(|s| s.is_directed()),
        }
    }

    pub fn is_static(&self) -> bool {
        matches!(self, GraphSeries::Static(_))
    }

    /// Applies `f` to every stored snapshot, keeping static series static.
    pub fn try_map(&self, mut f: impl FnMut(&MultigraphSnapshot) -> Result<MultigraphSnapshot>) -> Result<Self> {
        Ok(match self {
            GraphSeries::Static(s) => GraphSeries::Static(f(s)?),
            GraphSeries::Timed(v) => GraphSeries::Timed(v.iter().map(f).collect::<Result<_>>()?),
        })
    }
}

/// All graph types of a run, keyed by tag (`"c"`, `"s"`, `"d"`, ...).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GraphTrajectory {
    types: BTreeMap<String, GraphSeries>,
}

impl GraphTrajectory {
    pub fn insert(&mut self, graph_type: impl Into<String>, series: GraphSeries) {
        self.types.insert(graph_type.into(), series);
    }

    pub fn get(&self, graph_type: &str) -> Option<&GraphSeries> {
        self.types.get(graph_type)
    }

    pub fn contains(&self, graph_type: &str) -> bool {
        self.types.contains_key(graph_type)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &GraphSeries)> {
        self.types.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn snapshot(&self, graph_type: &str, t: usize) -> Result<&MultigraphSnapshot> {
        let series = self
            .types
            .get(graph_type)
            .ok_or_else(|| Error::UnknownGraphType(graph_type.to_string()))?;
        series.at(t).ok_or(Error::TimeOutOfRange {
            t,
            length: match series {
                GraphSeries::Timed(v) => v.len().saturating_sub(1),
                GraphSeries::Static(_) => t,
            },
        })
    }

    pub(crate) fn validate(&self, num_agents: usize, length: usize) -> Result<()> {
        for (tag, series) in &self.types {
            let snaps: Vec<&MultigraphSnapshot> = match series {
                GraphSeries::Static(s) => vec![s],
                GraphSeries::Timed(v) => {
                    if v.len() != length + 1 {
                        return Err(Error::model(format!(
                            "graph `{tag}` has {} snapshots, the trace needs {}",
                            v.len(),
                            length + 1
                        )));
                    }
                    if v.iter().any(|s| s.is_directed() != v[0].is_directed()) {
                        return Err(Error::model(format!("graph `{tag}` mixes directed and undirected snapshots")));
                    }
                    v.iter().collect()
                }
            };
            for s in snaps {
                if s.max_agent() > num_agents {
                    return Err(Error::model(format!(
                        "graph `{tag}` references agent {} but the run has {num_agents}",
                        s.max_agent()
                    )));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn window(&self, start: usize, end: usize) -> Self {
        let types = self
            .types
            .iter()
            .map(|(k, s)| {
                let s = match s {
                    GraphSeries::Static(g) => GraphSeries::Static(g.clone()),
                    GraphSeries::Timed(v) => GraphSeries::Timed(v[start..=end].to_vec()),
                };
                (k.clone(), s)
            })
            .collect();
        Self { types }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_edges_are_canonical() {
        let g = MultigraphSnapshot::new(false, [Edge::new(3, 1, 1, 2.0)]).unwrap();
        assert_eq!(g.edges()[0].src, 1);
        assert_eq!(g.edges()[0].dst, 3);
        assert_eq!(g.adjacent(3, Direction::In)[0].other, 1);
        assert_eq!(g.adjacent(1, Direction::In)[0].other, 3);
    }

    #[test]
    fn duplicate_triples_rejected() {
        assert!(MultigraphSnapshot::new(true, [Edge::new(1, 2, 1, 1.0), Edge::new(1, 2, 1, 3.0)]).is_err());
        // same pair both ways on an undirected graph is one triple
        assert!(MultigraphSnapshot::new(false, [Edge::new(1, 2, 1, 1.0), Edge::new(2, 1, 1, 1.0)]).is_err());
        // but distinct on a directed graph
        assert!(MultigraphSnapshot::new(true, [Edge::new(1, 2, 1, 1.0), Edge::new(2, 1, 1, 1.0)]).is_ok());
    }

    #[test]
    fn nan_rejected_infinity_allowed() {
        assert!(MultigraphSnapshot::new(true, [Edge::new(1, 2, 1, f64::NAN)]).is_err());
        assert!(MultigraphSnapshot::new(true, [Edge::new(1, 2, 1, f64::INFINITY)]).is_ok());
        assert!(MultigraphSnapshot::new(true, [Edge::new(1, 2, 1, f64::NEG_INFINITY)]).is_ok());
    }
}
