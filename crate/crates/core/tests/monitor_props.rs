use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stlgo::distributed::{is_determinable, monitor_dist, monitor_dist_all, KnowledgeMask, MaskChange, Verdict};
use stlgo::formula::push_negations;
use stlgo::monitor::{monitor_local, oracle_eval, LocalMonitor, MonitorOptions};
use stlgo::random::{random_local, random_mask, random_run, FormulaConfig, RunConfig};
use stlgo::{CountSet, Direction, GraphSeries, LocalFormula, MasRun, TimeInterval};

fn instance(seed: u64) -> (ChaCha8Rng, MasRun, LocalFormula) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rcfg = RunConfig {
        num_agents: rng.gen_range(1..=6),
        length: rng.gen_range(0..=10),
        ..RunConfig::default()
    };
    let run = random_run(&mut rng, &rcfg);
    let depth = rng.gen_range(0..=4);
    let f = random_local(&mut rng, &FormulaConfig::default(), depth);
    (rng, run, f)
}

#[test]
fn kernel_matches_oracle_on_random_instances() {
    for seed in 0..1200 {
        let (mut rng, run, f) = instance(seed);
        let all = LocalMonitor::new(&f)
            .run_all(&run, 0, run.length(), MonitorOptions { parallel: seed % 2 == 0, ..Default::default() })
            .unwrap();
        let i = rng.gen_range(1..=run.num_agents());
        for t in 0..=run.length() {
            assert_eq!(all[i - 1].at(t), Some(oracle_eval(&run, &f, i, t).unwrap()), "seed {seed}: {f} at agent {i}, t {t}");
        }
    }
}

#[test]
fn partial_range_matches_full_range() {
    for seed in 0..200 {
        let (mut rng, run, f) = instance(seed);
        let t1 = rng.gen_range(0..=run.length());
        let t0 = rng.gen_range(0..=t1);
        let m = LocalMonitor::new(&f);
        let full = m.run_all(&run, 0, run.length(), MonitorOptions::default()).unwrap();
        let part = m.run_all(&run, t0, t1, MonitorOptions::default()).unwrap();
        for (a, b) in full.iter().zip(&part) {
            for t in t0..=t1 {
                assert_eq!(a.at(t), b.at(t), "seed {seed}");
            }
        }
    }
}

fn signals(run: &MasRun, f: &LocalFormula) -> Vec<Vec<bool>> {
    LocalMonitor::new(f)
        .run_all(run, 0, run.length(), MonitorOptions::default())
        .unwrap()
        .iter()
        .map(|s| s.values().to_vec())
        .collect()
}

fn swap_dir(f: &LocalFormula) -> LocalFormula {
    use LocalFormula::*;
    match f {
        True | Atom(_) => f.clone(),
        Not(a) => LocalFormula::not(swap_dir(a)),
        And(a, b) => LocalFormula::and(swap_dir(a), swap_dir(b)),
        Or(a, b) => LocalFormula::or(swap_dir(a), swap_dir(b)),
        Implies(a, b) => LocalFormula::implies(swap_dir(a), swap_dir(b)),
        Until(i, a, b) => LocalFormula::until(*i, swap_dir(a), swap_dir(b)),
        Eventually(i, a) => LocalFormula::eventually(*i, swap_dir(a)),
        Always(i, a) => LocalFormula::always(*i, swap_dir(a)),
        Graph(op) => {
            let mut op = op.clone();
            op.dir = match op.dir {
                Direction::In => Direction::Out,
                Direction::Out => Direction::In,
            };
            op.child = Box::new(swap_dir(&op.child));
            Graph(op)
        }
    }
}

fn undirected_copy(run: &MasRun) -> MasRun {
    let mut out = run.clone();
    for (tag, series) in run.graphs().iter() {
        let s = series
            .try_map(|snap| stlgo::MultigraphSnapshot::new(false, snap.edges().iter().copied().filter(|e| e.src <= e.dst)))
            .unwrap();
        out = out.with_graph(tag, s).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eventually_is_dual_of_always(seed in any::<u64>(), lo in 0u64..4, len in 0u64..4, unbounded in any::<bool>()) {
        let (_, run, f) = instance(seed);
        let i = if unbounded { TimeInterval::unbounded(lo) } else { TimeInterval::bounded(lo, lo + len).unwrap() };
        let ev = LocalFormula::eventually(i, f.clone());
        let dual = LocalFormula::not(LocalFormula::always(i, LocalFormula::not(f)));
        prop_assert_eq!(signals(&run, &ev), signals(&run, &dual));
    }

    #[test]
    fn count_complement_is_negation(seed in any::<u64>()) {
        let (_, run, f) = instance(seed);
        let g = push_negations(&LocalFormula::not(f.clone()));
        let neg: Vec<Vec<bool>> = signals(&run, &f).iter().map(|r| r.iter().map(|b| !b).collect()).collect();
        prop_assert_eq!(signals(&run, &g), neg);
    }

    #[test]
    fn direction_irrelevant_on_undirected_graphs(seed in any::<u64>()) {
        let (_, run, f) = instance(seed);
        let run = undirected_copy(&run);
        prop_assert_eq!(signals(&run, &f), signals(&run, &swap_dir(&f)));
    }

    #[test]
    fn larger_count_set_is_weaker(seed in any::<u64>(), lo in 0u64..4, extra in 0u64..3) {
        let (mut rng, run, _) = instance(seed);
        let child = random_local(&mut rng, &FormulaConfig::default(), 2);
        let small = CountSet::single(lo + extra, stlgo::Bound::Finite(lo + extra + 1)).unwrap();
        let large = CountSet::at_least(lo);
        let mk = |c: CountSet| LocalFormula::graph(Direction::In, "a", c, stlgo::WeightInterval::ALL, child.clone());
        let (s, l) = (signals(&run, &mk(small)), signals(&run, &mk(large)));
        for (rs, rl) in s.iter().zip(&l) {
            for (a, b) in rs.iter().zip(rl) {
                prop_assert!(!a || *b);
            }
        }
    }

    #[test]
    fn kleene_monitor_is_sound(seed in any::<u64>(), p in 0.0f64..1.0) {
        let (mut rng, run, f) = instance(seed);
        let observer = rng.gen_range(1..=run.num_agents());
        let mask = random_mask(&mut rng, &run, observer, p);
        let dist = monitor_dist_all(&run, &mask, &f, 0, run.length(), MonitorOptions::default()).unwrap();
        for (j, sig) in dist.iter().enumerate() {
            for (t, v) in sig.iter() {
                if let Some(b) = v.to_bool() {
                    prop_assert_eq!(b, oracle_eval(&run, &f, j + 1, t).unwrap(), "{} agent {} t {}", f, j + 1, t);
                }
            }
        }
    }

    #[test]
    fn full_knowledge_collapses(seed in any::<u64>()) {
        let (mut rng, run, f) = instance(seed);
        let observer = rng.gen_range(1..=run.num_agents());
        let mask = KnowledgeMask::full(observer, run.num_agents(), run.length()).unwrap();
        let dist = monitor_dist_all(&run, &mask, &f, 0, run.length(), MonitorOptions::default()).unwrap();
        let central = signals(&run, &f);
        for (d, c) in dist.iter().zip(&central) {
            prop_assert_eq!(d.values().iter().map(|v| v.to_bool()).collect::<Vec<_>>(), c.iter().map(|b| Some(*b)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn more_knowledge_keeps_verdicts(seed in any::<u64>(), p in 0.0f64..0.8, steps in 1usize..4) {
        let (mut rng, run, f) = instance(seed);
        let observer = rng.gen_range(1..=run.num_agents());
        let mut mask = random_mask(&mut rng, &run, observer, p);
        let mut prev = monitor_dist_all(&run, &mask, &f, 0, run.length(), MonitorOptions::default()).unwrap();
        for _ in 0..steps {
            let subject = rng.gen_range(1..=run.num_agents());
            let from = rng.gen_range(0..=run.length());
            let to = rng.gen_range(from..=run.length());
            let next_mask = mask.refine(&[MaskChange { subject, from, to, known: true }]).unwrap();
            prop_assert!(mask.is_refined_by(&next_mask));
            let next = monitor_dist_all(&run, &next_mask, &f, 0, run.length(), MonitorOptions::default()).unwrap();
            for (a, b) in prev.iter().zip(&next) {
                for (x, y) in a.values().iter().zip(b.values()) {
                    prop_assert!(*x == Verdict::Unknown || x == y);
                }
            }
            mask = next_mask;
            prev = next;
        }
    }
}

#[test]
fn determinable_means_no_unknowns() {
    let mut determinable = 0;
    let mut by_count = 0;
    for seed in 0..3000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rcfg = RunConfig {
            num_agents: rng.gen_range(1..=5),
            length: rng.gen_range(0..=6),
            edge_prob: rng.gen_range(0.05..0.5),
            ..RunConfig::default()
        };
        let run = random_run(&mut rng, &rcfg);
        let depth = rng.gen_range(1..=3);
        let f = random_local(&mut rng, &FormulaConfig::default(), depth);
        let subject = rng.gen_range(1..=run.num_agents());
        let observer = if rng.gen_bool(0.5) { subject } else { rng.gen_range(1..=run.num_agents()) };
        let p = rng.gen_range(0.0..1.0);
        let mask = random_mask(&mut rng, &run, observer, p);
        let t = rng.gen_range(0..=run.length());
        let report = is_determinable(&run, &mask, &f, subject, t).unwrap();
        if report.determinable {
            determinable += 1;
            if report.by_count > 0 {
                by_count += 1;
            }
            let sig = monitor_dist(&run, &mask, &f, subject, t).unwrap();
            assert_eq!(sig.unknown_count(), 0, "seed {seed}: {f}");
        }
    }
    assert!(determinable > 300, "only {determinable} determinable cases");
    assert!(by_count > 20, "only {by_count} cases needed the count bound");
}

#[test]
fn duplicate_edge_adds_one_to_the_count() {
    // agent 1 with one satisfied in-neighbor; duplicating the edge lifts the count from 1 to 2
    let traj = stlgo::MasTrajectory::from_fn(2, 1, 0, |_, _| vec![1.0]).unwrap();
    let build = |m: u32| {
        let edges = (1..=m).map(|u| stlgo::Edge::new(2, 1, u, 1.0));
        let mut g = stlgo::GraphTrajectory::default();
        g.insert("a", GraphSeries::Static(stlgo::MultigraphSnapshot::new(true, edges).unwrap()));
        MasRun::new(traj.clone(), g).unwrap()
    };
    let exactly = |n: u64| {
        LocalFormula::graph(Direction::In, "a", CountSet::exactly(n), stlgo::WeightInterval::ALL, LocalFormula::True)
    };
    for m in 1..4u32 {
        let run = build(m);
        for n in 0..5u64 {
            let v = monitor_local(&run, &exactly(n), 1, 0).unwrap().at(0).unwrap();
            assert_eq!(v, n == m as u64);
        }
    }
}
