//! Bike-share and drone-surveillance specifications, and the per-step
//! timing loop used by the benchmarks and the command line.

use std::time::Instant;

use crate::distributed::KnowledgeMask;
use crate::error::Result;
use crate::formula::{Direction, GlobalFormula, LocalFormula};
use crate::model::MasRun;
use crate::monitor::{GlobalMonitor, LocalMonitor, MonitorOptions};
use crate::parser::{parse_global, parse_local};
use crate::scenario::{gen_drone, star_subgraph, DroneScenarioConfig};

fn local(src: &str) -> LocalFormula {
    parse_local(src).expect("built-in formula parses")
}

fn global(src: &str) -> GlobalFormula {
    parse_global(src).expect("built-in formula parses")
}

fn agent_set(v: &[usize]) -> String {
    let s: Vec<String> = v.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", s.join(","))
}

/// Few bikes left means at least five stations within 8 minutes (either
/// mode of `mt`) have at least 8 bikes.
pub fn bike_phi1() -> LocalFormula {
    local("G[0,24]([x[0] < 5] -> Out{mt} E[5,inf] W[0,8] [x[0] >= 8])")
}

/// A burst of arrivals means at most four stations within 2 miles gain more
/// than 5 bikes on net.
pub fn bike_phi2() -> LocalFormula {
    local("G[0,24]([x[1] > 15] -> In{d} E[0,4] W[0,2] [x[1] - x[2] > 5])")
}

/// Every station in `v` keeps three stations within a mile stocked with 8 bikes.
pub fn bike_big_phi1(v: &[usize]) -> GlobalFormula {
    global(&format!("FA{}(G[0,24](Out{{d}} E[3,inf] W[0,1] [x[0] >= 8]))", agent_set(v)))
}

/// Nearly empty stations in `v` have three stations within 12 minutes with 4 bikes.
pub fn bike_big_phi2(v: &[usize]) -> GlobalFormula {
    global(&format!("FA{}(G[0,24]([x[0] < 2] -> Out{{mt}} E[3,inf] W[0,12] [x[0] >= 4]))", agent_set(v)))
}

/// Keeps at least 0.3 miles from every other drone for two minutes.
pub fn drone_phi3(sigma: usize) -> LocalFormula {
    let k = sigma - 1;
    local(&format!("G[0,2](Out{{d}} E[{k},{k}] W[0.3,inf] true)"))
}

/// Within two minutes, senses and can talk to some other drone.
pub fn drone_phi4(sigma: usize) -> LocalFormula {
    local(&format!("F[0,2](Out<forall>{{s,c}} E[1,{}] true)", sigma - 1))
}

/// All drones keep their distance for two minutes.
pub fn drone_big_phi3(sigma: usize) -> GlobalFormula {
    let k = sigma - 1;
    global(&format!("G[0,2](FA{{1..{sigma}}}(Out{{d}} E[{k},{k}] W[0.3,inf] true))"))
}

/// Tags of the star subgraphs around the pre-selected drone.
pub const STAR_SENSING: &str = "si";
pub const STAR_COMM: &str = "ci";

/// Drones within a mile of `center` are sensed by or talk to it, for two
/// minutes. Needs the graphs added by [`with_star_graphs`].
pub fn drone_big_phi4(sigma: usize, center: usize) -> GlobalFormula {
    let (c, s) = (center, sigma);
    let parts: Vec<String> = (1..=s)
        .filter(|&j| j != c)
        .map(|j| {
            let dx = format!("(s[{c}][0] - s[{j}][0])");
            let dy = format!("(s[{c}][1] - s[{j}][1])");
            format!("([1 - sqrt({dx} * {dx} + {dy} * {dy}) >= 0] -> @{j}.(In{{{STAR_SENSING},{STAR_COMM}}} E[1,1] true))")
        })
        .collect();
    global(&format!("G[0,2]({})", parts.join(" & ")))
}

/// Adds the sensing and communication graphs restricted to edges at `center`.
pub fn with_star_graphs(run: &MasRun, center: usize) -> Result<MasRun> {
    let run = run.with_graph(STAR_SENSING, star_subgraph(run, "s", center)?)?;
    run.with_graph(STAR_COMM, star_subgraph(&run, "c", center)?)
}

/// What `observer` knows: its own states and those of agents joined to it
/// by an edge (either direction) of weight at most the given limit in the
/// named graph, at any time.
pub fn neighborhood_mask(run: &MasRun, observer: usize, limits: &[(&str, f64)]) -> Result<KnowledgeMask> {
    let n = run.num_agents();
    let mut near = vec![false; n + 1];
    near[observer] = true;
    for &(tag, limit) in limits {
        for t in 0..=run.length() {
            let g = run.snapshot(tag, t)?;
            for dir in [Direction::In, Direction::Out] {
                for a in g.adjacent(observer, dir) {
                    if a.weight <= limit {
                        near[a.other] = true;
                    }
                }
            }
        }
    }
    KnowledgeMask::from_fn(observer, n, run.length(), |j, _| near[j])
}

/// One specification of the drone benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DroneFormula {
    Phi3,
    Phi4,
    BigPhi3,
    BigPhi4,
}

impl DroneFormula {
    pub const ALL: [DroneFormula; 4] = [DroneFormula::Phi3, DroneFormula::Phi4, DroneFormula::BigPhi3, DroneFormula::BigPhi4];

    pub fn name(self) -> &'static str {
        match self {
            DroneFormula::Phi3 => "phi3",
            DroneFormula::Phi4 => "phi4",
            DroneFormula::BigPhi3 => "Phi3",
            DroneFormula::BigPhi4 => "Phi4",
        }
    }
}

impl std::str::FromStr for DroneFormula {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        DroneFormula::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| crate::error::Error::InvalidFormula(format!("unknown drone formula `{s}`")))
    }
}

/// Satisfactions, violations and timing of one formula over all steps.
#[derive(Clone, Debug, PartialEq)]
pub struct StepReport {
    pub formula: DroneFormula,
    pub sigma: usize,
    pub sat: usize,
    pub vio: usize,
    /// Verdict at each step `0..=horizon`.
    pub verdicts: Vec<bool>,
    pub mean_ms: f64,
    pub total_ms: f64,
}

/// The drone whose view the local formulas and the star graphs use.
pub const BENCH_AGENT: usize = 1;

/// The run used by the drone benchmark: enough samples that every step
/// `0..=horizon` has its two-minute window.
pub fn drone_bench_run(sigma: usize, horizon: usize, seed: u64) -> Result<MasRun> {
    let run = gen_drone(&DroneScenarioConfig { sigma, seed, length: horizon + 2, ..Default::default() })?;
    with_star_graphs(&run, BENCH_AGENT)
}

/// Monitors `formula` on `[t, t]` separately for each step `t` in
/// `0..=horizon`, timing each step.
pub fn drone_steps(run: &MasRun, formula: DroneFormula, horizon: usize, opts: MonitorOptions) -> Result<StepReport> {
    let sigma = run.num_agents();
    enum M {
        L(LocalMonitor),
        G(GlobalMonitor),
    }
    let m = match formula {
        DroneFormula::Phi3 => M::L(LocalMonitor::new(&drone_phi3(sigma))),
        DroneFormula::Phi4 => M::L(LocalMonitor::new(&drone_phi4(sigma))),
        DroneFormula::BigPhi3 => M::G(GlobalMonitor::new(&drone_big_phi3(sigma))),
        DroneFormula::BigPhi4 => M::G(GlobalMonitor::new(&drone_big_phi4(sigma, BENCH_AGENT))),
    };
    let mut verdicts = Vec::with_capacity(horizon + 1);
    let start = Instant::now();
    for t in 0..=horizon {
        let s = match &m {
            M::L(l) => l.run(run, BENCH_AGENT, t, t, opts)?,
            M::G(g) => g.run(run, t, t, opts)?,
        };
        verdicts.push(s.at(t).expect("signal covers t"));
    }
    let total_ms = start.elapsed().as_secs_f64() * 1e3;
    let sat = verdicts.iter().filter(|v| **v).count();
    Ok(StepReport {
        formula,
        sigma,
        sat,
        vio: verdicts.len() - sat,
        verdicts,
        mean_ms: total_ms / (horizon + 1) as f64,
        total_ms,
    })
}
