//! Encodings of counting (SaSTL), somewhere/everywhere (SSTL) and
//! reach/escape (STREL) operators as graph operators.
//!
//! The encodings need derived graphs (shortest distances, labeled
//! subgraphs) that are computed here and added to the run under their own
//! tags before monitoring.

mod graphs;
mod strel;

pub use graphs::{
    labeled_subgraph, labeled_tag, shortest_distance_graph, shortest_distances, with_labeled_subgraph,
    with_shortest_distance, LabelMap,
};
pub use strel::{enumerate_traces, Trace, TraceMode};

use crate::error::{Error, Result};
use crate::formula::{Bound, CountSet, Direction, GlobalFormula, LocalFormula, WeightInterval};
use crate::model::MasRun;

/// Default tag of the shortest-distance graph.
pub const DS_TAG: &str = "ds";

/// Comparison `~` in a counting constraint `count ~ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
}

impl std::str::FromStr for Comparison {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "<=" | "le" => Comparison::Le,
            "<" | "lt" => Comparison::Lt,
            ">=" | "ge" => Comparison::Ge,
            ">" | "gt" => Comparison::Gt,
            "=" | "==" | "eq" => Comparison::Eq,
            _ => return Err(Error::InvalidFormula(format!("unknown comparison `{s}`"))),
        })
    }
}

impl Comparison {
    /// `{n in N | n ~ c}` as a count set.
    pub fn count_set(self, c: f64) -> CountSet {
        let set = match self {
            Comparison::Le if c >= 0.0 => CountSet::single(0, Bound::Finite(c.floor() as u64)),
            Comparison::Lt if c > 0.0 => CountSet::single(0, Bound::Finite(c.ceil() as u64 - 1)),
            Comparison::Ge => Ok(CountSet::at_least(c.ceil().max(0.0) as u64)),
            Comparison::Gt => Ok(CountSet::at_least(if c < 0.0 { 0 } else { c.floor() as u64 + 1 })),
            Comparison::Eq if c >= 0.0 && c.fract() == 0.0 => Ok(CountSet::exactly(c as u64)),
            _ => Ok(CountSet::empty()),
        };
        set.expect("bounds are ordered")
    }

    pub fn holds(self, n: f64, c: f64) -> bool {
        match self {
            Comparison::Le => n <= c,
            Comparison::Lt => n < c,
            Comparison::Ge => n >= c,
            Comparison::Gt => n > c,
            Comparison::Eq => n == c,
        }
    }
}

/// Aggregation of a counting operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CountOp {
    Sum,
    /// Average over the `n_prime` agents meeting the label and distance
    /// requirements; only expressible when that number is given.
    Avg { n_prime: Option<u64> },
}

/// Somewhere or everywhere within a distance range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpatialOp {
    Somewhere,
    Everywhere,
}

/// Reach or escape.
#[derive(Clone, Debug, PartialEq)]
pub enum StrelOp {
    /// `phi1 R_W phi2`
    Reach(LocalFormula, LocalFormula),
    /// `E_W phi`
    Escape(LocalFormula),
}

/// Graph tags and direction used by the encodings.
///
/// On undirected graphs `In` and `Out` coincide; on directed ones the
/// distance from `i` to `j` is an edge out of `i`, so [`Translator::for_graph`]
/// picks `Out` there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translator {
    /// Tag of the shortest-distance graph.
    pub ds_tag: String,
    /// Tag of the underlying distance graph (for hop nesting).
    pub base_tag: String,
    pub dir: Direction,
}

impl Default for Translator {
    fn default() -> Self {
        Self { ds_tag: DS_TAG.into(), base_tag: "d".into(), dir: Direction::In }
    }
}

impl Translator {
    /// Settings for a run whose distance graph is stored under `base_tag`.
    pub fn for_graph(run: &MasRun, base_tag: &str) -> Result<Self> {
        let series = run.graphs().get(base_tag).ok_or_else(|| Error::UnknownGraphType(base_tag.to_string()))?;
        let dir = if series.is_directed() { Direction::Out } else { Direction::In };
        Ok(Self { ds_tag: DS_TAG.into(), base_tag: base_tag.into(), dir })
    }

    /// Local encoding of `C^op_(W, psi) inner ~ c` at agent `i`: a graph
    /// operator over the `psi`-labeled subgraph anchored at `i`.
    #[allow(clippy::too_many_arguments)]
    pub fn sastl_count_local(
        &self,
        psi: &str,
        w: WeightInterval,
        op: CountOp,
        cmp: Comparison,
        c: f64,
        inner: LocalFormula,
        i: usize,
    ) -> Result<LocalFormula> {
        let threshold = match op {
            CountOp::Sum => c,
            CountOp::Avg { n_prime: Some(n) } => c * n as f64,
            CountOp::Avg { n_prime: None } => return Err(Error::AvgRequiresCount),
        };
        let set = cmp.count_set(threshold);
        if set.is_empty() {
            return Ok(LocalFormula::falsum());
        }
        Ok(LocalFormula::graph(self.dir, &labeled_tag(psi, i), set, w, inner))
    }

    /// `i.(In{psi_i} C' W inner)`.
    #[allow(clippy::too_many_arguments)]
    pub fn sastl_count(
        &self,
        psi: &str,
        w: WeightInterval,
        op: CountOp,
        cmp: Comparison,
        c: f64,
        inner: LocalFormula,
        i: usize,
    ) -> Result<GlobalFormula> {
        Ok(GlobalFormula::bind(i, self.sastl_count_local(psi, w, op, cmp, c, inner, i)?))
    }

    /// Local encoding of somewhere/everywhere over the shortest-distance graph.
    pub fn sstl_local(&self, op: SpatialOp, w: WeightInterval, inner: LocalFormula) -> LocalFormula {
        match op {
            SpatialOp::Somewhere => LocalFormula::graph(self.dir, &self.ds_tag, CountSet::at_least(1), w, inner),
            SpatialOp::Everywhere => {
                LocalFormula::graph(self.dir, &self.ds_tag, CountSet::exactly(0), w, LocalFormula::not(inner))
            }
        }
    }

    pub fn sstl(&self, op: SpatialOp, w: WeightInterval, inner: LocalFormula, i: usize) -> GlobalFormula {
        GlobalFormula::bind(i, self.sstl_local(op, w, inner))
    }

    /// Disjunction over the trace set of `i` in the distance graph at time `t`.
    ///
    /// The result is tied to `t`: trace sets change with the graph.
    pub fn strel(&self, op: &StrelOp, w: WeightInterval, i: usize, run: &MasRun, t: usize) -> Result<GlobalFormula> {
        let g = run.snapshot(&self.base_tag, t)?;
        let n = run.num_agents();
        let mode = match op {
            StrelOp::Reach(..) => TraceMode::Reach,
            StrelOp::Escape(_) => TraceMode::Escape,
        };
        let traces = enumerate_traces(g, i, w, mode, n)?;
        Ok(strel_formula(op, &traces))
    }

    /// Reach by nested graph operators, counting hops: valid when every
    /// edge of the distance graph has weight 1.
    ///
    /// `phi1 R_[a,b] phi2` becomes the disjunction over hop counts `k` in
    /// `[a, b]` of `phi1 & In (phi1 & In (... phi2))` with `k` operators.
    /// Nesting follows walks, which may revisit agents; for `a = 0` this
    /// agrees with reach over simple traces. Unbounded `b` is cut at
    /// `a + num_agents - 1`, beyond which walks add nothing new.
    pub fn strel_reach_hops(
        &self,
        phi1: &LocalFormula,
        phi2: &LocalFormula,
        w: WeightInterval,
        num_agents: usize,
    ) -> LocalFormula {
        let lo = w.lo().max(0.0).ceil() as usize;
        let cap = lo + num_agents.saturating_sub(1);
        let hi = if w.hi().is_finite() { (w.hi().floor().max(-1.0) as i64).min(cap as i64) } else { cap as i64 };
        let step = |f: LocalFormula| {
            LocalFormula::and(
                phi1.clone(),
                LocalFormula::graph(self.dir, &self.base_tag, CountSet::at_least(1), WeightInterval::ALL, f),
            )
        };
        let mut nested = phi2.clone();
        let mut options = Vec::new();
        for k in 0..=hi.max(-1) {
            if k as usize >= lo {
                options.push(nested.clone());
            }
            nested = step(nested);
        }
        options.into_iter().reduce(LocalFormula::or).unwrap_or_else(LocalFormula::falsum)
    }
}

fn strel_formula(op: &StrelOp, traces: &[Trace]) -> GlobalFormula {
    GlobalFormula::disjunction(traces.iter().map(|tr| {
        let nodes = tr.agents();
        match op {
            StrelOp::Reach(phi1, phi2) => {
                let last = GlobalFormula::bind(*nodes.last().expect("traces are non-empty"), phi2.clone());
                let mut prefix = nodes[..nodes.len() - 1].to_vec();
                prefix.sort_unstable();
                if prefix.is_empty() {
                    last
                } else {
                    GlobalFormula::and(GlobalFormula::ForAll(prefix, phi1.clone()), last)
                }
            }
            StrelOp::Escape(phi) => {
                let mut all = nodes.to_vec();
                all.sort_unstable();
                GlobalFormula::ForAll(all, phi.clone())
            }
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::LocalExpr;

    #[test]
    fn count_sets_from_comparisons() {
        let s = |lo: u64, hi: Option<u64>| CountSet::single(lo, hi.map_or(Bound::Infinite, Bound::Finite)).unwrap();
        assert_eq!(Comparison::Lt.count_set(1.0), s(0, Some(0)));
        assert_eq!(Comparison::Le.count_set(2.5), s(0, Some(2)));
        assert_eq!(Comparison::Lt.count_set(2.5), s(0, Some(2)));
        assert_eq!(Comparison::Ge.count_set(2.0), s(2, None));
        assert_eq!(Comparison::Gt.count_set(2.0), s(3, None));
        assert_eq!(Comparison::Gt.count_set(-1.0), s(0, None));
        assert_eq!(Comparison::Eq.count_set(1.5), CountSet::empty());
        assert_eq!(Comparison::Lt.count_set(0.0), CountSet::empty());
    }

    #[test]
    fn counting_example_prints_as_expected() {
        let pi = LocalFormula::atom(LocalExpr::x(0));
        let f = Translator::default()
            .sastl_count("H", WeightInterval::new(0.0, 10.0).unwrap(), CountOp::Sum, Comparison::Ge, 2.0, pi.clone(), 3)
            .unwrap();
        assert_eq!(f.to_string(), "@3.(In{psiH_3} E[2,inf] W[0,10] [x[0] >= 0])");
        let avg = Translator::default().sastl_count("H", WeightInterval::ALL, CountOp::Avg { n_prime: None }, Comparison::Ge, 0.5, pi, 3);
        assert_eq!(avg.unwrap_err(), Error::AvgRequiresCount);
    }
}
