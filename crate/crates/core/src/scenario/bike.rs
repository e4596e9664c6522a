use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Edge, GraphSeries, GraphTrajectory, MasRun, MasTrajectory, MultigraphSnapshot};

/// Bike-share stations with hourly state `[n, n_in, n_out]`: bikes docked,
/// bikes arriving and bikes leaving during the hour.
#[derive(Clone, Debug, PartialEq)]
pub struct BikeScenarioConfig {
    pub stations: usize,
    pub seed: u64,
    /// Last hour index; states are emitted for `0..=hours`.
    pub hours: usize,
    /// Dock capacity range.
    pub capacity: (u32, u32),
    /// Largest hourly arrivals or departures at a station.
    pub max_flow: u32,
    /// Side of the square area, in miles.
    pub area: f64,
    /// Chance that an ordered pair of stations is linked in `d`.
    pub distance_density: f64,
    /// Chance that an ordered pair of stations is linked in `mt`.
    pub transit_density: f64,
}

impl Default for BikeScenarioConfig {
    fn default() -> Self {
        Self {
            stations: 10,
            seed: 0,
            hours: 24,
            capacity: (15, 40),
            max_flow: 20,
            area: 3.0,
            distance_density: 0.6,
            transit_density: 0.5,
        }
    }
}

impl BikeScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidModel(m.to_string()));
        if self.stations == 0 {
            return bad("bike scenario needs at least one station");
        }
        if self.capacity.0 > self.capacity.1 {
            return bad("capacity range is reversed");
        }
        if !(0.0..=1.0).contains(&self.distance_density) || !(0.0..=1.0).contains(&self.transit_density) {
            return bad("densities must lie in [0, 1]");
        }
        if !(self.area > 0.0) {
            return bad("area must be positive");
        }
        Ok(())
    }
}

/// Generates station states and two static directed graphs: `d` (walking
/// miles, one edge per linked pair) and `mt` (edge 1 public transport
/// minutes, edge 2 walking minutes, for every linked pair).
///
/// `n(t+1) = n(t) + n_in(t) - n_out(t)` holds for every station and hour;
/// departures are capped by the bikes available and arrivals by free docks.
pub fn gen_bike(cfg: &BikeScenarioConfig) -> Result<MasRun> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let m = cfg.stations;
    let pos: Vec<[f64; 2]> = (0..m).map(|_| [rng.gen_range(0.0..cfg.area), rng.gen_range(0.0..cfg.area)]).collect();
    let cap: Vec<u32> = (0..m).map(|_| rng.gen_range(cfg.capacity.0..=cfg.capacity.1)).collect();
    let mut n: Vec<u32> = cap.iter().map(|&c| rng.gen_range(0..=c)).collect();
    // stations lean towards arrivals or departures
    let bias: Vec<f64> = (0..m).map(|_| rng.gen_range(0.3..1.0)).collect();

    let mut states = Vec::with_capacity(cfg.hours + 1);
    for hour in 0..=cfg.hours {
        // morning and evening peaks
        let peak = if hour.abs_diff(8) < 2 || hour.abs_diff(18) < 2 { 1.0 } else { 0.4 };
        let mut row = Vec::with_capacity(m);
        for s in 0..m {
            let scale = cfg.max_flow as f64 * peak;
            let want_in = (rng.gen_range(0.0..=scale) * bias[s]).round() as u32;
            let want_out = (rng.gen_range(0.0..=scale) * (1.3 - bias[s])).round() as u32;
            let n_out = want_out.min(n[s]);
            let n_in = want_in.min(cap[s] - n[s] + n_out);
            row.push(vec![n[s] as f64, n_in as f64, n_out as f64]);
            n[s] = n[s] + n_in - n_out;
        }
        states.push(row);
    }
    let traj = MasTrajectory::new(m, 3, states)?;

    let miles = |i: usize, j: usize| (pos[i][0] - pos[j][0]).hypot(pos[i][1] - pos[j][1]);
    let mut d = Vec::new();
    let mut mt = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            // street grids make walking longer than the straight line
            let walk = round2(miles(i, j) * rng.gen_range(1.1..1.4));
            if rng.gen_bool(cfg.distance_density) {
                d.push(Edge::new(i + 1, j + 1, 1, walk));
            }
            if rng.gen_bool(cfg.transit_density) {
                let transit = round2(4.0 + miles(i, j) * rng.gen_range(3.0..6.0));
                mt.push(Edge::new(i + 1, j + 1, 1, transit));
                mt.push(Edge::new(i + 1, j + 1, 2, round2(walk * 20.0)));
            }
        }
    }
    let mut graphs = GraphTrajectory::default();
    graphs.insert("d", GraphSeries::Static(MultigraphSnapshot::new(true, d)?));
    graphs.insert("mt", GraphSeries::Static(MultigraphSnapshot::new(true, mt)?));
    MasRun::new(traj, graphs)
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// `k` distinct stations drawn with `seed`, sorted; all stations if `k >= stations`.
pub fn sample_stations(stations: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<usize> = sample(&mut rng, stations, k.min(stations)).into_iter().map(|i| i + 1).collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dynamics_identity_and_bounds() {
        for seed in 0..20 {
            let cfg = BikeScenarioConfig { seed, ..Default::default() };
            let run = gen_bike(&cfg).unwrap();
            assert_eq!(run.length(), 24);
            for i in 1..=cfg.stations {
                for t in 0..run.length() {
                    let (x, y) = (run.state(i, t), run.state(i, t + 1));
                    assert_eq!(y[0] - x[0], x[1] - x[2]);
                    assert!(y[0] >= 0.0);
                }
            }
        }
    }

    #[test]
    fn zero_flows_keep_counts_constant() {
        let run = gen_bike(&BikeScenarioConfig { max_flow: 0, ..Default::default() }).unwrap();
        for i in 1..=10 {
            assert!((0..=24).all(|t| run.state(i, t)[0] == run.state(i, 0)[0]));
        }
    }

    #[test]
    fn sampled_stations_are_distinct() {
        let v = sample_stations(50, 30, 1);
        assert_eq!(v.len(), 30);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sample_stations(5, 30, 1), vec![1, 2, 3, 4, 5]);
    }
}
