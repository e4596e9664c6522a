use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Edge, GraphSeries, GraphTrajectory, MasRun, MasTrajectory, MultigraphSnapshot};

/// Drone surveillance: `sigma` stations with one drone each, dispatched to
/// regions of interest and returning to their station afterwards.
///
/// Drones `1..=sigma / 2` form the first category, the rest the second.
#[derive(Clone, Debug, PartialEq)]
pub struct DroneScenarioConfig {
    pub sigma: usize,
    pub seed: u64,
    /// Last sample index; positions are emitted for `0..=length` minutes.
    pub length: usize,
    pub regions: usize,
    /// Station positions in miles; drawn uniformly in the area when empty.
    pub stations: Vec<[f64; 2]>,
    /// Square miles per drone; the area is a square of side
    /// `sqrt(sigma * area_per_drone)`.
    pub area_per_drone: f64,
    /// Radius of a region of interest, in miles.
    pub region_radius: f64,
    /// Miles per minute for the first and second category.
    pub speeds: [f64; 2],
    /// Sensing range, in miles.
    pub radius: f64,
    /// Chance per minute that an idle drone is dispatched.
    pub dispatch_prob: f64,
    /// Range of minutes spent over a region.
    pub survey_minutes: (usize, usize),
    /// Step size of the random walk while surveying, in miles.
    pub jitter: f64,
}

impl Default for DroneScenarioConfig {
    fn default() -> Self {
        Self {
            sigma: 4,
            seed: 0,
            length: 82,
            regions: 4,
            stations: Vec::new(),
            area_per_drone: 4.0,
            region_radius: 0.5,
            speeds: [0.5, 0.35],
            radius: 1.0,
            dispatch_prob: 0.25,
            survey_minutes: (3, 10),
            jitter: 0.1,
        }
    }
}

impl DroneScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidModel(m.to_string()));
        if self.sigma < 2 {
            return bad("drone scenario needs sigma >= 2");
        }
        if self.length < 1 {
            return bad("drone scenario needs length >= 1");
        }
        if !(self.radius > 0.0) {
            return bad("sensing radius must be positive");
        }
        if self.regions == 0 {
            return bad("drone scenario needs at least one region");
        }
        if !self.stations.is_empty() && self.stations.len() != self.sigma {
            return bad("one station position per drone");
        }
        if self.speeds.iter().any(|s| !(*s > 0.0)) || !(self.area_per_drone > 0.0) || self.region_radius < 0.0 {
            return bad("speeds and area must be positive");
        }
        if self.survey_minutes.0 > self.survey_minutes.1 || !(0.0..=1.0).contains(&self.dispatch_prob) {
            return bad("invalid survey range or dispatch probability");
        }
        Ok(())
    }

    /// Side of the square area, in miles.
    pub fn side(&self) -> f64 {
        (self.sigma as f64 * self.area_per_drone).sqrt()
    }

    /// Category of drone `i`: 0 for `i <= sigma / 2`, else 1.
    pub fn category(&self, i: usize) -> usize {
        usize::from(i > self.sigma / 2)
    }
}

enum Phase {
    Idle,
    Outbound([f64; 2]),
    Survey(usize),
    Return,
}

fn step_towards(p: [f64; 2], target: [f64; 2], speed: f64) -> ([f64; 2], bool) {
    let (dx, dy) = (target[0] - p[0], target[1] - p[1]);
    let d = dx.hypot(dy);
    if d <= speed {
        (target, true)
    } else {
        ([p[0] + dx / d * speed, p[1] + dy / d * speed], false)
    }
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Generates drone positions (state `[x, y]`) and the graphs
/// `d` (complete, weighted by distance), `c` (static, same category) and
/// `s` (same category and within the sensing radius).
pub fn gen_drone(cfg: &DroneScenarioConfig) -> Result<MasRun> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.sigma;
    let side = cfg.side();
    let point = |rng: &mut ChaCha8Rng| [rng.gen_range(0.0..side), rng.gen_range(0.0..side)];
    let stations: Vec<[f64; 2]> =
        if cfg.stations.is_empty() { (0..n).map(|_| point(&mut rng)).collect() } else { cfg.stations.clone() };
    let regions: Vec<[f64; 2]> = (0..cfg.regions).map(|_| point(&mut rng)).collect();

    let mut pos = stations.clone();
    let mut phase: Vec<Phase> = (0..n).map(|_| Phase::Idle).collect();
    let mut states = Vec::with_capacity(cfg.length + 1);
    for _ in 0..=cfg.length {
        states.push(pos.iter().map(|p| p.to_vec()).collect::<Vec<_>>());
        for a in 0..n {
            let speed = cfg.speeds[cfg.category(a + 1)];
            phase[a] = match phase[a] {
                Phase::Idle if rng.gen_bool(cfg.dispatch_prob) => {
                    let r = regions[rng.gen_range(0..regions.len())];
                    let (angle, dist) = (rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.0..=1.0f64));
                    let dist = cfg.region_radius * dist.sqrt();
                    Phase::Outbound([r[0] + dist * angle.cos(), r[1] + dist * angle.sin()])
                }
                Phase::Idle => Phase::Idle,
                Phase::Outbound(target) => {
                    let (p, arrived) = step_towards(pos[a], target, speed);
                    pos[a] = p;
                    if arrived {
                        Phase::Survey(rng.gen_range(cfg.survey_minutes.0..=cfg.survey_minutes.1))
                    } else {
                        Phase::Outbound(target)
                    }
                }
                Phase::Survey(0) => Phase::Return,
                Phase::Survey(left) => {
                    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
                    pos[a] = [pos[a][0] + cfg.jitter * angle.cos(), pos[a][1] + cfg.jitter * angle.sin()];
                    Phase::Survey(left - 1)
                }
                Phase::Return => {
                    let (p, arrived) = step_towards(pos[a], stations[a], speed);
                    pos[a] = p;
                    if arrived {
                        Phase::Idle
                    } else {
                        Phase::Return
                    }
                }
            };
        }
    }
    let traj = MasTrajectory::new(n, 2, states)?;

    let pairs = || (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)));
    let same = |i: usize, j: usize| cfg.category(i) == cfg.category(j);
    let mut d = Vec::with_capacity(cfg.length + 1);
    let mut s = Vec::with_capacity(cfg.length + 1);
    for t in 0..=cfg.length {
        let dist = |i: usize, j: usize| distance(traj.state(i, t), traj.state(j, t));
        d.push(MultigraphSnapshot::new(false, pairs().map(|(i, j)| Edge::new(i, j, 1, dist(i, j))))?);
        s.push(MultigraphSnapshot::new(
            false,
            pairs().filter(|&(i, j)| same(i, j) && dist(i, j) <= cfg.radius).map(|(i, j)| Edge::new(i, j, 1, 1.0)),
        )?);
    }
    let c = MultigraphSnapshot::new(false, pairs().filter(|&(i, j)| same(i, j)).map(|(i, j)| Edge::new(i, j, 1, 1.0)))?;

    let mut graphs = GraphTrajectory::default();
    graphs.insert("d", GraphSeries::Timed(d));
    graphs.insert("c", GraphSeries::Static(c));
    graphs.insert("s", GraphSeries::Timed(s));
    MasRun::new(traj, graphs)
}

/// The part of graph `tag` made of edges incident to `center`.
pub fn star_subgraph(run: &MasRun, tag: &str, center: usize) -> Result<GraphSeries> {
    let series = run.graphs().get(tag).ok_or_else(|| Error::UnknownGraphType(tag.to_string()))?;
    series.try_map(|g| {
        MultigraphSnapshot::new(
            g.is_directed(),
            g.edges().iter().filter(|e| e.src == center || e.dst == center).copied(),
        )
    })
}
