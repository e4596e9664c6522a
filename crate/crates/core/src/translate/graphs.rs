use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::model::{Direction, Edge, GraphSeries, MasRun, MultigraphSnapshot};

/// Labels (atomic propositions such as `"C"` or `"H"`) carried by each agent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelMap {
    num_agents: usize,
    labels: BTreeMap<usize, BTreeSet<String>>,
}

impl LabelMap {
    /// Every agent `1..=num_agents` starts with no labels.
    pub fn new(num_agents: usize) -> Self {
        Self { num_agents, labels: (1..=num_agents).map(|i| (i, BTreeSet::new())).collect() }
    }

    pub fn from_pairs<'a>(num_agents: usize, pairs: impl IntoIterator<Item = (usize, &'a str)>) -> Result<Self> {
        let mut m = Self::new(num_agents);
        for (agent, label) in pairs {
            m.insert(agent, label)?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, agent: usize, label: impl Into<String>) -> Result<()> {
        match self.labels.get_mut(&agent) {
            Some(set) => {
                set.insert(label.into());
                Ok(())
            }
            None => Err(Error::AgentOutOfRange { agent, num_agents: self.num_agents }),
        }
    }

    pub fn has(&self, agent: usize, label: &str) -> bool {
        self.labels.get(&agent).is_some_and(|s| s.contains(label))
    }

    pub fn labels(&self, agent: usize) -> impl Iterator<Item = &str> {
        self.labels.get(&agent).into_iter().flatten().map(String::as_str)
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

fn check_weights(g: &MultigraphSnapshot) -> Result<()> {
    match g.edges().iter().find(|e| e.weight < 0.0) {
        Some(e) => Err(Error::NegativeWeight { src: e.src, dst: e.dst, weight: e.weight }),
        None => Ok(()),
    }
}

/// Shortest path-weight sums from `source` following edge direction;
/// `f64::INFINITY` where unreachable. Index 0 is unused.
pub fn shortest_distances(g: &MultigraphSnapshot, source: usize, num_agents: usize) -> Result<Vec<f64>> {
    check_weights(g)?;
    Ok(dijkstra(g, source, num_agents))
}

fn dijkstra(g: &MultigraphSnapshot, source: usize, num_agents: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; num_agents + 1];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for a in g.adjacent(u, Direction::Out) {
            let nd = d + a.weight;
            if a.other <= num_agents && nd < dist[a.other] {
                dist[a.other] = nd;
                heap.push(Entry(nd, a.other));
            }
        }
    }
    dist
}

/// The shortest-distance graph: one edge per ordered reachable pair
/// weighted by the shortest path-weight sum, including `(i, i)` with weight
/// 0 for every agent. Keeps the input's directedness.
pub fn shortest_distance_graph(g: &MultigraphSnapshot, num_agents: usize) -> Result<MultigraphSnapshot> {
    check_weights(g)?;
    let mut edges = Vec::new();
    for i in 1..=num_agents {
        let dist = dijkstra(g, i, num_agents);
        for (j, &d) in dist.iter().enumerate().skip(1) {
            if d.is_finite() && (g.is_directed() || i <= j) {
                edges.push(Edge::new(i, j, 1, d));
            }
        }
    }
    MultigraphSnapshot::new(g.is_directed(), edges)
}

/// The subgraph of a shortest-distance graph induced on the agents labeled
/// `psi` plus the anchor `i`.
///
/// The anchor's zero-weight self pair is kept only when the anchor itself
/// carries `psi`, so counting over this graph at `i` counts exactly the
/// labeled agents.
pub fn labeled_subgraph(ds: &MultigraphSnapshot, labels: &LabelMap, psi: &str, i: usize) -> Result<MultigraphSnapshot> {
    let keep = |j: usize| j == i || labels.has(j, psi);
    let edges = ds
        .edges()
        .iter()
        .filter(|e| keep(e.src) && keep(e.dst))
        .filter(|e| !(e.src == i && e.dst == i) || labels.has(i, psi))
        .copied();
    MultigraphSnapshot::new(ds.is_directed(), edges)
}

/// Tag under which the labeled subgraph for `psi` anchored at `i` is stored.
pub fn labeled_tag(psi: &str, i: usize) -> String {
    format!("psi{psi}_{i}")
}

/// Adds the shortest-distance graph of `base` under `tag`.
pub fn with_shortest_distance(run: &MasRun, base: &str, tag: &str) -> Result<MasRun> {
    let series = run.graphs().get(base).ok_or_else(|| Error::UnknownGraphType(base.to_string()))?;
    let n = run.num_agents();
    run.with_graph(tag, series.try_map(|g| shortest_distance_graph(g, n))?)
}

/// Adds the labeled subgraph of the shortest-distance graph stored under
/// `ds_tag`, under [`labeled_tag`].
pub fn with_labeled_subgraph(run: &MasRun, ds_tag: &str, labels: &LabelMap, psi: &str, i: usize) -> Result<MasRun> {
    if i == 0 || i > run.num_agents() {
        return Err(Error::AgentOutOfRange { agent: i, num_agents: run.num_agents() });
    }
    let series: &GraphSeries = run.graphs().get(ds_tag).ok_or_else(|| Error::UnknownGraphType(ds_tag.to_string()))?;
    run.with_graph(labeled_tag(psi, i), series.try_map(|g| labeled_subgraph(g, labels, psi, i))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::seven_agent_edges;

    fn seven_agent() -> MultigraphSnapshot {
        MultigraphSnapshot::new(false, seven_agent_edges()).unwrap()
    }

    fn weight(g: &MultigraphSnapshot, a: usize, b: usize) -> Option<f64> {
        g.adjacent(a, Direction::Out).iter().find(|x| x.other == b).map(|x| x.weight)
    }

    #[test]
    fn seven_agent_distances() {
        let ds = shortest_distance_graph(&seven_agent(), 7).unwrap();
        assert_eq!(weight(&ds, 3, 7), Some(14.0));
        assert_eq!(weight(&ds, 7, 3), Some(14.0));
        for i in 1..=7 {
            assert_eq!(weight(&ds, i, i), Some(0.0));
        }
        let from3: Vec<f64> = [1, 2, 4, 5].iter().map(|&j| weight(&ds, 3, j).unwrap()).collect();
        assert_eq!(from3, vec![6.0, 8.0, 8.0, 6.0]);
    }

    #[test]
    fn single_edge_and_negative_weight() {
        let g = MultigraphSnapshot::new(true, [Edge::new(1, 2, 1, 2.5)]).unwrap();
        let ds = shortest_distance_graph(&g, 2).unwrap();
        assert_eq!(weight(&ds, 1, 2), Some(2.5));
        assert_eq!(weight(&ds, 2, 1), None);
        let bad = MultigraphSnapshot::new(true, [Edge::new(1, 2, 1, -1.0)]).unwrap();
        assert!(matches!(shortest_distance_graph(&bad, 2), Err(Error::NegativeWeight { .. })));
    }

    #[test]
    fn labeled_subgraph_vertices() {
        let ds = shortest_distance_graph(&seven_agent(), 7).unwrap();
        let mut labels = LabelMap::new(7);
        for j in [1, 2, 4, 5, 6, 7] {
            labels.insert(j, "H").unwrap();
        }
        labels.insert(3, "C").unwrap();
        let h = labeled_subgraph(&ds, &labels, "H", 3).unwrap();
        assert_eq!(h.edges().len(), ds.edges().len() - 1);
        assert_eq!(weight(&h, 3, 3), None);
        let none = labeled_subgraph(&ds, &labels, "X", 3).unwrap();
        assert!(none.edges().is_empty());
        let everyone = LabelMap::from_pairs(7, (1..=7).map(|j| (j, "H"))).unwrap();
        assert_eq!(labeled_subgraph(&ds, &everyone, "H", 1).unwrap(), ds);
    }
}
