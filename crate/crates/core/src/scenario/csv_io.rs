use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Edge, GraphSeries, GraphTrajectory, MasRun, MasTrajectory, MultigraphSnapshot};

#[derive(Debug, Serialize, Deserialize)]
struct StateRow {
    station: usize,
    hour: usize,
    n: f64,
    n_in: f64,
    n_out: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct DistanceRow {
    src: usize,
    dst: usize,
    miles: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct TimeRow {
    src: usize,
    dst: usize,
    transit_min: f64,
    walk_min: f64,
}

fn data_err(path: &Path, line: Option<u64>, msg: impl std::fmt::Display) -> Error {
    match line {
        Some(l) => Error::Data(format!("{}: line {l}: {msg}", path.display())),
        None => Error::Data(format!("{}: {msg}", path.display())),
    }
}

/// Reads all rows of `path`, reporting the line of the first bad one.
fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<(u64, T)>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| data_err(path, None, e))?;
    let mut rows = Vec::new();
    for rec in reader.deserialize() {
        let row: T = rec.map_err(|e| {
            let line = e.position().map(|p| p.line());
            data_err(path, line, e)
        })?;
        rows.push((rows.len() as u64 + 2, row));
    }
    Ok(rows)
}

fn check_station(path: &Path, line: u64, id: usize, what: &str) -> Result<()> {
    if id == 0 {
        return Err(data_err(path, Some(line), format!("column {what}: station ids are 1-based")));
    }
    Ok(())
}

fn check_weight(path: &Path, line: u64, w: f64, what: &str) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(data_err(path, Some(line), format!("column {what}: weight {w} is not a finite non-negative number")));
    }
    Ok(())
}

/// Builds a station run from three CSV files:
///
/// * states: `station,hour,n,n_in,n_out`, one row per station and hour;
/// * distances: `src,dst,miles`, the directed graph `d`;
/// * times: `src,dst,transit_min,walk_min`, the directed multigraph `mt`
///   with edge 1 for public transport and edge 2 for walking.
///
/// Stations are numbered from 1 and hours from 0; the largest station id
/// and hour fix the number of stations and the trace length.
pub fn ingest_station_csv(states: &Path, distances: &Path, times: &Path) -> Result<MasRun> {
    let rows: Vec<(u64, StateRow)> = read_rows(states)?;
    if rows.is_empty() {
        return Err(data_err(states, None, "no state rows"));
    }
    let mut cells: BTreeMap<(usize, usize), (u64, [f64; 3])> = BTreeMap::new();
    for (line, r) in &rows {
        check_station(states, *line, r.station, "station")?;
        for (v, col) in [(r.n, "n"), (r.n_in, "n_in"), (r.n_out, "n_out")] {
            if !v.is_finite() {
                return Err(data_err(states, Some(*line), format!("column {col}: value {v} is not finite")));
            }
        }
        if let Some((first, _)) = cells.insert((r.station, r.hour), (*line, [r.n, r.n_in, r.n_out])) {
            return Err(data_err(
                states,
                Some(*line),
                format!("station {} hour {} already given on line {first}", r.station, r.hour),
            ));
        }
    }
    let num = cells.keys().map(|k| k.0).max().unwrap_or(0);
    let length = cells.keys().map(|k| k.1).max().unwrap_or(0);
    let mut data = vec![vec![Vec::new(); num]; length + 1];
    for (t, row) in data.iter_mut().enumerate() {
        for (i, cell) in row.iter_mut().enumerate() {
            match cells.get(&(i + 1, t)) {
                Some((_, x)) => *cell = x.to_vec(),
                None => return Err(data_err(states, None, format!("missing row for station {} hour {t}", i + 1))),
            }
        }
    }
    let traj = MasTrajectory::new(num, 3, data)?;

    let mut d = Vec::new();
    for (line, r) in read_rows::<DistanceRow>(distances)? {
        check_station(distances, line, r.src, "src")?;
        check_station(distances, line, r.dst, "dst")?;
        check_weight(distances, line, r.miles, "miles")?;
        d.push(Edge::new(r.src, r.dst, 1, r.miles));
    }
    let mut mt = Vec::new();
    for (line, r) in read_rows::<TimeRow>(times)? {
        check_station(times, line, r.src, "src")?;
        check_station(times, line, r.dst, "dst")?;
        check_weight(times, line, r.transit_min, "transit_min")?;
        check_weight(times, line, r.walk_min, "walk_min")?;
        mt.push(Edge::new(r.src, r.dst, 1, r.transit_min));
        mt.push(Edge::new(r.src, r.dst, 2, r.walk_min));
    }
    let graph = |path: &Path, edges: Vec<Edge>| -> Result<GraphSeries> {
        if let Some(e) = edges.iter().find(|e| e.src > num || e.dst > num) {
            return Err(data_err(path, None, format!("edge {}->{} names a station beyond {num}", e.src, e.dst)));
        }
        let g = MultigraphSnapshot::new(true, edges).map_err(|e| data_err(path, None, e))?;
        Ok(GraphSeries::Static(g))
    };
    let mut graphs = GraphTrajectory::default();
    graphs.insert("d", graph(distances, d)?);
    graphs.insert("mt", graph(times, mt)?);
    MasRun::new(traj, graphs)
}

fn write_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Data(format!("{}: {e}", path.display()))
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| write_err(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| write_err(path, e))?;
    }
    w.flush().map_err(|e| write_err(path, e))
}

/// Writes a station run (three-component states, static directed `d` and
/// `mt`) in the layout [`ingest_station_csv`] reads.
pub fn export_station_csv(run: &MasRun, states: &Path, distances: &Path, times: &Path) -> Result<()> {
    if run.state_dim() != 3 {
        return Err(Error::Data(format!("station runs have 3 state components, found {}", run.state_dim())));
    }
    let static_graph = |tag: &str| -> Result<&MultigraphSnapshot> {
        match run.graphs().get(tag) {
            Some(GraphSeries::Static(g)) if g.is_directed() => Ok(g),
            Some(_) => Err(Error::Data(format!("graph `{tag}` must be static and directed"))),
            None => Err(Error::UnknownGraphType(tag.to_string())),
        }
    };
    let d = static_graph("d")?;
    let mt = static_graph("mt")?;

    let state_rows = (1..=run.num_agents()).flat_map(|i| {
        (0..=run.length()).map(move |t| {
            let x = run.state(i, t);
            StateRow { station: i, hour: t, n: x[0], n_in: x[1], n_out: x[2] }
        })
    });
    write_rows(states, state_rows)?;

    if let Some(e) = d.edges().iter().find(|e| e.index != 1) {
        return Err(Error::Data(format!("graph `d` has parallel edge {}->{} #{}", e.src, e.dst, e.index)));
    }
    write_rows(distances, d.edges().iter().map(|e| DistanceRow { src: e.src, dst: e.dst, miles: e.weight }))?;

    let mut pairs: BTreeMap<(usize, usize), [Option<f64>; 2]> = BTreeMap::new();
    for e in mt.edges() {
        match e.index {
            1 | 2 => pairs.entry((e.src, e.dst)).or_default()[e.index as usize - 1] = Some(e.weight),
            k => return Err(Error::Data(format!("graph `mt` edge {}->{} has index {k}; expected 1 or 2", e.src, e.dst))),
        }
    }
    let mut time_rows = Vec::with_capacity(pairs.len());
    for ((src, dst), w) in pairs {
        match w {
            [Some(transit_min), Some(walk_min)] => time_rows.push(TimeRow { src, dst, transit_min, walk_min }),
            _ => return Err(Error::Data(format!("graph `mt` pair {src}->{dst} lacks a transit or walking edge"))),
        }
    }
    write_rows(times, time_rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{gen_bike, BikeScenarioConfig};
    use std::fs;

    #[test]
    fn round_trip_through_csv() {
        let dir = tempfile::tempdir().unwrap();
        let (s, d, t) = (dir.path().join("s.csv"), dir.path().join("d.csv"), dir.path().join("t.csv"));
        let run = gen_bike(&BikeScenarioConfig { seed: 3, ..Default::default() }).unwrap();
        export_station_csv(&run, &s, &d, &t).unwrap();
        assert_eq!(ingest_station_csv(&s, &d, &t).unwrap(), run);
    }

    #[test]
    fn minimal_files() {
        let dir = tempfile::tempdir().unwrap();
        let (s, d, t) = (dir.path().join("s.csv"), dir.path().join("d.csv"), dir.path().join("t.csv"));
        fs::write(&s, "station,hour,n,n_in,n_out\n1,0,5,1,0\n1,1,6,0,0\n").unwrap();
        fs::write(&d, "src,dst,miles\n").unwrap();
        fs::write(&t, "src,dst,transit_min,walk_min\n").unwrap();
        let run = ingest_station_csv(&s, &d, &t).unwrap();
        assert_eq!((run.num_agents(), run.length()), (1, 1));
    }

    #[test]
    fn diagnostics() {
        let dir = tempfile::tempdir().unwrap();
        let (s, d, t) = (dir.path().join("s.csv"), dir.path().join("d.csv"), dir.path().join("t.csv"));
        fs::write(&d, "src,dst,miles\n1,2,NaN\n").unwrap();
        fs::write(&t, "src,dst,transit_min,walk_min\n").unwrap();
        fs::write(&s, "station,hour,n,n_in,n_out\n1,0,5,1,0\n2,0,1,1,1\n1,2,6,0,0\n2,1,1,0,0\n2,2,1,0,0\n").unwrap();
        let msg = ingest_station_csv(&s, &d, &t).unwrap_err().to_string();
        assert!(msg.contains("missing row for station 1 hour 1"), "{msg}");
        fs::write(&s, "station,hour,n,n_in,n_out\n1,0,5,1,0\n2,0,1,1,1\n").unwrap();
        let msg = ingest_station_csv(&s, &d, &t).unwrap_err().to_string();
        assert!(msg.contains("line 2") && msg.contains("miles"), "{msg}");
        fs::write(&s, "station,hour,n,n_in,n_out\n1,0,x,1,0\n").unwrap();
        let msg = ingest_station_csv(&s, &d, &t).unwrap_err().to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }
}
