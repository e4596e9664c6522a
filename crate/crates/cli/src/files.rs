//! On-disk JSON formats, all tagged with [`SCHEMA`].

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use stlgo::translate::LabelMap;
use stlgo::{
    Edge, Error, GraphSeries, GraphTrajectory, KnowledgeMask, MasRun, MasTrajectory, MultigraphSnapshot, Result,
    Signal, Verdict,
};

pub const SCHEMA: &str = "stlgo/1";

fn check_schema(path: &Path, schema: &str) -> Result<()> {
    if schema != SCHEMA {
        return Err(Error::Data(format!("{}: schema `{schema}`, expected `{SCHEMA}`", path.display())));
    }
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RunFile {
    pub schema: String,
    pub num_agents: usize,
    pub state_dim: usize,
    pub length: usize,
    /// `states[t][agent - 1][k]`
    pub states: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub schema: String,
    pub types: BTreeMap<String, GraphType>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphType {
    pub directed: bool,
    #[serde(rename = "static", default)]
    pub is_static: bool,
    pub snapshots: Vec<SnapshotFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SnapshotFile {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<usize>,
    /// `[src, dst, u, w]`; `w` may be the string `"inf"` or `"-inf"`.
    pub edges: Vec<(usize, usize, u32, Value)>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MaskFile {
    pub schema: String,
    pub observer: usize,
    /// `[subject, t_from, t_to]`, inclusive.
    pub known: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LabelFile {
    pub schema: String,
    /// Label to the agents carrying it.
    pub labels: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SignalFile {
    pub schema: String,
    pub t0: usize,
    /// `0`, `1` or `"?"` per time.
    pub values: Vec<Value>,
}

pub fn read_trajectory(path: &Path) -> Result<MasTrajectory> {
    let f: RunFile = read_json(path)?;
    check_schema(path, &f.schema)?;
    if f.states.len() != f.length + 1 {
        return Err(Error::Data(format!(
            "{}: length {} needs {} samples, found {}",
            path.display(),
            f.length,
            f.length + 1,
            f.states.len()
        )));
    }
    let traj = MasTrajectory::new(f.num_agents, f.state_dim, f.states)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    Ok(traj)
}

fn weight_from(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) if s == "inf" => Some(f64::INFINITY),
        Value::String(s) if s == "-inf" => Some(f64::NEG_INFINITY),
        _ => None,
    }
}

fn weight_to(w: f64) -> Value {
    if w == f64::INFINITY {
        Value::from("inf")
    } else if w == f64::NEG_INFINITY {
        Value::from("-inf")
    } else {
        Value::from(w)
    }
}

pub fn read_graphs(path: &Path) -> Result<GraphTrajectory> {
    let f: GraphFile = read_json(path)?;
    check_schema(path, &f.schema)?;
    let err = |msg: String| Error::Data(format!("{}: {msg}", path.display()));
    let mut graphs = GraphTrajectory::default();
    for (tag, ty) in f.types {
        let mut snaps = Vec::with_capacity(ty.snapshots.len());
        for (k, s) in ty.snapshots.into_iter().enumerate() {
            if s.t.is_some_and(|t| t != k) {
                return Err(err(format!("graph `{tag}` snapshot {k} is labeled t = {}", s.t.unwrap_or(k))));
            }
            let mut edges = Vec::with_capacity(s.edges.len());
            for (src, dst, u, w) in s.edges {
                let w = weight_from(&w).ok_or_else(|| err(format!("graph `{tag}` edge {src}->{dst}: bad weight {w}")))?;
                edges.push(Edge::new(src, dst, u, w));
            }
            snaps.push(MultigraphSnapshot::new(ty.directed, edges).map_err(|e| err(format!("graph `{tag}`: {e}")))?);
        }
        let series = if ty.is_static {
            match <[MultigraphSnapshot; 1]>::try_from(snaps) {
                Ok([s]) => GraphSeries::Static(s),
                Err(v) => return Err(err(format!("static graph `{tag}` has {} snapshots", v.len()))),
            }
        } else {
            GraphSeries::Timed(snaps)
        };
        graphs.insert(tag, series);
    }
    Ok(graphs)
}

/// Trajectory plus graphs, checked against each other.
pub fn read_bundle(run: &Path, graphs: &Path) -> Result<MasRun> {
    MasRun::new(read_trajectory(run)?, read_graphs(graphs)?)
}

pub fn run_file(run: &MasRun) -> RunFile {
    RunFile {
        schema: SCHEMA.into(),
        num_agents: run.num_agents(),
        state_dim: run.state_dim(),
        length: run.length(),
        states: run.trajectory().to_nested(),
    }
}

fn snapshot_file(g: &MultigraphSnapshot, t: Option<usize>) -> SnapshotFile {
    SnapshotFile { t, edges: g.edges().iter().map(|e| (e.src, e.dst, e.index, weight_to(e.weight))).collect() }
}

pub fn graph_file(graphs: &GraphTrajectory) -> GraphFile {
    let types = graphs
        .iter()
        .map(|(tag, series)| {
            let ty = match series {
                GraphSeries::Static(g) => {
                    GraphType { directed: g.is_directed(), is_static: true, snapshots: vec![snapshot_file(g, None)] }
                }
                GraphSeries::Timed(v) => GraphType {
                    directed: series.is_directed(),
                    is_static: false,
                    snapshots: v.iter().enumerate().map(|(t, g)| snapshot_file(g, Some(t))).collect(),
                },
            };
            (tag.to_string(), ty)
        })
        .collect();
    GraphFile { schema: SCHEMA.into(), types }
}

pub fn write_bundle(run: &MasRun, run_path: &Path, graph_path: &Path) -> Result<()> {
    write_json(run_path, &run_file(run))?;
    write_json(graph_path, &graph_file(run.graphs()))
}

pub fn read_mask(path: &Path, run: &MasRun) -> Result<KnowledgeMask> {
    let f: MaskFile = read_json(path)?;
    check_schema(path, &f.schema)?;
    KnowledgeMask::from_intervals(f.observer, run.num_agents(), run.length(), &f.known)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

pub fn mask_file(mask: &KnowledgeMask) -> MaskFile {
    let known = (1..=mask.num_agents())
        .flat_map(|j| mask.known_intervals(j).into_iter().map(move |(a, b)| (j, a, b)))
        .collect();
    MaskFile { schema: SCHEMA.into(), observer: mask.observer(), known }
}

pub fn read_labels(path: &Path, num_agents: usize) -> Result<LabelMap> {
    let f: LabelFile = read_json(path)?;
    check_schema(path, &f.schema)?;
    let mut m = LabelMap::new(num_agents);
    for (label, agents) in f.labels {
        for a in agents {
            m.insert(a, label.clone()).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(m)
}

fn verdict_value(v: Verdict) -> Value {
    match v {
        Verdict::True => Value::from(1),
        Verdict::False => Value::from(0),
        Verdict::Unknown => Value::from("?"),
    }
}

pub fn signal_file<V: Copy + Into<Verdict>>(s: &Signal<V>) -> SignalFile {
    SignalFile { schema: SCHEMA.into(), t0: s.t0(), values: s.values().iter().map(|&v| verdict_value(v.into())).collect() }
}

/// Reads a signal file; Boolean files come back without `?` entries.
pub fn read_signal(path: &Path) -> Result<Signal<Verdict>> {
    let f: SignalFile = read_json(path)?;
    check_schema(path, &f.schema)?;
    let values = f
        .values
        .iter()
        .map(|v| match v {
            Value::Number(n) if n.as_u64() == Some(1) => Ok(Verdict::True),
            Value::Number(n) if n.as_u64() == Some(0) => Ok(Verdict::False),
            Value::String(s) if s == "?" => Ok(Verdict::Unknown),
            other => Err(Error::Data(format!("{}: bad signal value {other}", path.display()))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Signal::new(f.t0, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use stlgo::random::{random_mask, random_run, RunConfig};
    use rand::SeedableRng;

    #[test]
    fn files_read_back_identically() {
        let dir = tempfile::tempdir().unwrap();
        let (r, g, m, s) = (dir.path().join("r"), dir.path().join("g"), dir.path().join("m"), dir.path().join("s"));
        for seed in 0..20 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let run = random_run(&mut rng, &RunConfig::default());
            write_bundle(&run, &r, &g).unwrap();
            assert_eq!(read_bundle(&r, &g).unwrap(), run);
            let mask = random_mask(&mut rng, &run, 1, 0.5);
            write_json(&m, &mask_file(&mask)).unwrap();
            assert_eq!(read_mask(&m, &run).unwrap(), mask);
        }
        let sig = Signal::new(2, vec![Verdict::True, Verdict::Unknown, Verdict::False]);
        write_json(&s, &signal_file(&sig)).unwrap();
        assert_eq!(read_signal(&s).unwrap(), sig);
    }

    #[test]
    fn infinite_weights_use_strings() {
        let g = MultigraphSnapshot::new(true, [Edge::new(1, 2, 1, f64::INFINITY)]).unwrap();
        let mut graphs = GraphTrajectory::default();
        graphs.insert("x", GraphSeries::Static(g));
        let f = graph_file(&graphs);
        assert_eq!(f.types["x"].snapshots[0].edges[0].3, Value::from("inf"));
    }
}
