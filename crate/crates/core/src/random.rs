//! Seeded generators for formulas and runs, used by property tests, fuzzing
//! and benchmarks.
//!
//! Constants are multiples of one half so every generated formula prints
//! and parses back exactly.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::distributed::KnowledgeMask;
use crate::formula::{
    Bound, CountSet, Direction, Expr, GlobalExpr, GlobalFormula, GraphOp, LocalExpr, LocalFormula, Quantifier,
    TimeInterval, WeightInterval,
};
use crate::model::{Edge, GraphSeries, GraphTrajectory, MasRun, MasTrajectory, MultigraphSnapshot};

/// Shape limits for random formulas.
#[derive(Clone, Debug)]
pub struct FormulaConfig {
    /// State components atoms may read (`x[0]..x[components - 1]`).
    pub components: usize,
    /// Graph tags graph operators may name.
    pub tags: Vec<String>,
    /// Largest finite time bound.
    pub max_time: u64,
    pub allow_unbounded: bool,
    /// Allow graph operators over several tags and `<forall>`.
    pub allow_multi_graph: bool,
    /// Largest finite count bound.
    pub max_count: u64,
}

impl Default for FormulaConfig {
    fn default() -> Self {
        Self {
            components: 2,
            tags: vec!["a".into(), "b".into(), "m".into()],
            max_time: 4,
            allow_unbounded: true,
            allow_multi_graph: true,
            max_count: 3,
        }
    }
}

fn half<R: Rng + ?Sized>(rng: &mut R, lo: i32, hi: i32) -> f64 {
    rng.gen_range(lo * 2..=hi * 2) as f64 / 2.0
}

fn time_interval<R: Rng + ?Sized>(rng: &mut R, cfg: &FormulaConfig) -> TimeInterval {
    let lo = rng.gen_range(0..=cfg.max_time);
    if cfg.allow_unbounded && rng.gen_bool(0.15) {
        TimeInterval::unbounded(lo)
    } else {
        TimeInterval::bounded(lo, rng.gen_range(lo..=cfg.max_time)).expect("lo <= hi")
    }
}

fn count_set<R: Rng + ?Sized>(rng: &mut R, cfg: &FormulaConfig) -> CountSet {
    if rng.gen_bool(0.05) {
        return CountSet::empty();
    }
    let pieces = if rng.gen_bool(0.2) { 2 } else { 1 };
    let intervals: Vec<(u64, Bound)> = (0..pieces)
        .map(|_| {
            let lo = rng.gen_range(0..=cfg.max_count);
            let hi = if rng.gen_bool(0.3) { Bound::Infinite } else { Bound::Finite(rng.gen_range(lo..=cfg.max_count)) };
            (lo, hi)
        })
        .collect();
    CountSet::from_intervals(intervals).expect("non-empty intervals")
}

fn weight_interval<R: Rng + ?Sized>(rng: &mut R) -> WeightInterval {
    if rng.gen_bool(0.5) {
        return WeightInterval::ALL;
    }
    let lo = if rng.gen_bool(0.2) { f64::NEG_INFINITY } else { half(rng, 0, 3) };
    let hi = if rng.gen_bool(0.2) { f64::INFINITY } else { lo.max(0.0) + half(rng, 0, 3) };
    WeightInterval::new(lo, hi).expect("lo <= hi")
}

fn expr<V: Clone, R: Rng + ?Sized>(rng: &mut R, depth: usize, var: &mut impl FnMut(&mut R) -> V) -> Expr<V> {
    let pick = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..8) };
    let mut sub = |rng: &mut R| Box::new(expr(rng, depth.saturating_sub(1), var));
    match pick {
        0 => Expr::Const(half(rng, -6, 6)),
        1 => Expr::Var(var(rng)),
        2 => Expr::Add(sub(rng), sub(rng)),
        3 => Expr::Sub(sub(rng), sub(rng)),
        4 => Expr::Mul(sub(rng), sub(rng)),
        5 => Expr::Abs(sub(rng)),
        6 => Expr::Min(sub(rng), sub(rng)),
        _ => Expr::Max(sub(rng), sub(rng)),
    }
}

fn local_atom<R: Rng + ?Sized>(rng: &mut R, cfg: &FormulaConfig) -> LocalFormula {
    let components = cfg.components.max(1);
    let mut var = |rng: &mut R| crate::formula::Component(rng.gen_range(0..components));
    let e: LocalExpr = if rng.gen_bool(0.7) {
        Expr::Var(var(rng)).sub(Expr::Const(half(rng, -6, 6)))
    } else {
        expr(rng, 2, &mut var)
    };
    if rng.gen_bool(0.25) {
        LocalFormula::not(LocalFormula::Atom(e))
    } else {
        LocalFormula::Atom(e)
    }
}

/// A random agent-local formula of nesting depth at most `depth`.
pub fn random_local<R: Rng + ?Sized>(rng: &mut R, cfg: &FormulaConfig, depth: usize) -> LocalFormula {
    if depth == 0 {
        return match rng.gen_range(0..10) {
            0 => LocalFormula::True,
            1 => LocalFormula::falsum(),
            _ => local_atom(rng, cfg),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..11) {
        0 => local_atom(rng, cfg),
        1 => LocalFormula::not(random_local(rng, cfg, d)),
        2 => LocalFormula::and(random_local(rng, cfg, d), random_local(rng, cfg, d)),
        3 => LocalFormula::or(random_local(rng, cfg, d), random_local(rng, cfg, d)),
        4 => LocalFormula::implies(random_local(rng, cfg, d), random_local(rng, cfg, d)),
        5 => {
            let i = time_interval(rng, cfg);
            LocalFormula::until(i, random_local(rng, cfg, d), random_local(rng, cfg, d))
        }
        6 => LocalFormula::eventually(time_interval(rng, cfg), random_local(rng, cfg, d)),
        7 => LocalFormula::always(time_interval(rng, cfg), random_local(rng, cfg, d)),
        _ => LocalFormula::Graph(random_graph_op(rng, cfg, d)),
    }
}

fn random_graph_op<R: Rng + ?Sized>(rng: &mut R, cfg: &FormulaConfig, depth: usize) -> GraphOp {
    let dir = if rng.gen_bool(0.5) { Direction::In } else { Direction::Out };
    let (quant, graphs) = if cfg.allow_multi_graph && cfg.tags.len() > 1 && rng.gen_bool(0.2) {
        let k = rng.gen_range(2..=cfg.tags.len());
        let graphs: Vec<String> = cfg.tags.choose_multiple(rng, k).cloned().collect();
        let quant = if rng.gen_bool(0.5) { Quantifier::Exists } else { Quantifier::Forall };
        (quant, graphs)
    } else {
        (Quantifier::Exists, vec![cfg.tags.choose(rng).cloned().unwrap_or_else(|| "a".into())])
    };
    GraphOp {
        dir,
        quant,
        graphs,
        count: count_set(rng, cfg),
        weight: weight_interval(rng),
        child: Box::new(random_local(rng, cfg, depth)),
    }
}

fn agent_list<R: Rng + ?Sized>(rng: &mut R, num_agents: usize) -> Vec<usize> {
    let all: Vec<usize> = (1..=num_agents).collect();
    let k = rng.gen_range(1..=num_agents);
    let mut v: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
    v.sort_unstable();
    v
}

/// A random system-level formula over agents `1..=num_agents`.
pub fn random_global<R: Rng + ?Sized>(rng: &mut R, cfg: &FormulaConfig, num_agents: usize, depth: usize) -> GlobalFormula {
    let num_agents = num_agents.max(1);
    let local_depth = depth.min(2);
    if depth == 0 {
        return match rng.gen_range(0..6) {
            0 => {
                let components = cfg.components.max(1);
                let mut var = |rng: &mut R| crate::formula::AgentComponent {
                    agent: rng.gen_range(1..=num_agents),
                    component: rng.gen_range(0..components),
                };
                let e: GlobalExpr = expr(rng, 1, &mut var);
                GlobalFormula::Atom(e)
            }
            1 => GlobalFormula::True,
            2 => GlobalFormula::ForAll(agent_list(rng, num_agents), random_local(rng, cfg, local_depth)),
            3 => GlobalFormula::Exists(agent_list(rng, num_agents), random_local(rng, cfg, local_depth)),
            _ => GlobalFormula::bind(rng.gen_range(1..=num_agents), random_local(rng, cfg, local_depth)),
        };
    }
    let d = depth - 1;
    let g = |rng: &mut R| random_global(rng, cfg, num_agents, d);
    match rng.gen_range(0..8) {
        0 => GlobalFormula::not(g(rng)),
        1 => GlobalFormula::and(g(rng), g(rng)),
        2 => GlobalFormula::or(g(rng), g(rng)),
        3 => GlobalFormula::implies(g(rng), g(rng)),
        4 => {
            let i = time_interval(rng, cfg);
            GlobalFormula::until(i, g(rng), g(rng))
        }
        5 => GlobalFormula::eventually(time_interval(rng, cfg), g(rng)),
        6 => GlobalFormula::always(time_interval(rng, cfg), g(rng)),
        _ => random_global(rng, cfg, num_agents, 0),
    }
}

/// Shape limits for random runs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub num_agents: usize,
    pub state_dim: usize,
    /// Last sample index `L`.
    pub length: usize,
    /// Graph tags; the first half (rounded up) are directed.
    pub tags: Vec<String>,
    /// Probability of an edge between an ordered pair at one instant.
    pub edge_prob: f64,
    /// Largest number of parallel edges per pair.
    pub max_multiplicity: u32,
    pub allow_self_loops: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            num_agents: 4,
            state_dim: 2,
            length: 6,
            tags: vec!["a".into(), "b".into(), "m".into()],
            edge_prob: 0.35,
            max_multiplicity: 2,
            allow_self_loops: true,
        }
    }
}

fn random_snapshot<R: Rng + ?Sized>(rng: &mut R, cfg: &RunConfig, directed: bool) -> MultigraphSnapshot {
    let mut edges = Vec::new();
    for src in 1..=cfg.num_agents {
        for dst in 1..=cfg.num_agents {
            if (src == dst && !cfg.allow_self_loops) || (!directed && dst < src) {
                continue;
            }
            if !rng.gen_bool(cfg.edge_prob) {
                continue;
            }
            let m = rng.gen_range(1..=cfg.max_multiplicity.max(1));
            for u in 1..=m {
                edges.push(Edge::new(src, dst, u, half(rng, 0, 4)));
            }
        }
    }
    MultigraphSnapshot::new(directed, edges).expect("generated edges are valid")
}

/// A random run: states are multiples of one half in `[-6, 6]`, graphs are
/// time-varying multigraphs with weights in `[0, 4]`.
pub fn random_run<R: Rng + ?Sized>(rng: &mut R, cfg: &RunConfig) -> MasRun {
    let traj = MasTrajectory::from_fn(cfg.num_agents, cfg.state_dim, cfg.length, |_, _| {
        (0..cfg.state_dim).map(|_| half(rng, -6, 6)).collect()
    })
    .expect("generated trajectory is valid");
    let mut graphs = GraphTrajectory::default();
    let directed_count = cfg.tags.len().div_ceil(2);
    for (k, tag) in cfg.tags.iter().enumerate() {
        let directed = k < directed_count;
        let series = if rng.gen_bool(0.2) {
            GraphSeries::Static(random_snapshot(rng, cfg, directed))
        } else {
            GraphSeries::Timed((0..=cfg.length).map(|_| random_snapshot(rng, cfg, directed)).collect())
        };
        graphs.insert(tag.clone(), series);
    }
    MasRun::new(traj, graphs).expect("generated run is valid")
}

/// A mask for `observer` where each other agent's state is known with
/// probability `p`, independently per sample.
pub fn random_mask<R: Rng + ?Sized>(rng: &mut R, run: &MasRun, observer: usize, p: f64) -> KnowledgeMask {
    KnowledgeMask::from_fn(observer, run.num_agents(), run.length(), |_, _| rng.gen_bool(p))
        .expect("observer is a valid agent")
}
