use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stlgo::monitor::{monitor_global, monitor_local, oracle_eval};
use stlgo::random::{random_local, FormulaConfig};
use stlgo::translate::{
    enumerate_traces, shortest_distance_graph, with_labeled_subgraph, with_shortest_distance, Comparison, CountOp,
    LabelMap, SpatialOp, StrelOp, TraceMode, Translator, DS_TAG,
};
use stlgo::{Direction, Edge, GraphSeries, GraphTrajectory, LocalFormula, MasRun, MasTrajectory, MultigraphSnapshot, WeightInterval};

/// A run with one distance graph `d` (static or per sample) and random states.
fn distance_run(rng: &mut ChaCha8Rng, n: usize, length: usize, directed: bool, positive: bool, unit: bool) -> MasRun {
    let traj = MasTrajectory::from_fn(n, 2, length, |_, _| vec![rng.gen_range(-4..=4) as f64, rng.gen_range(-4..=4) as f64]).unwrap();
    let p = rng.gen_range(0.2..0.7);
    let snap = |rng: &mut ChaCha8Rng| {
        let mut edges = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                if a == b || (!directed && b < a) || !rng.gen_bool(p) {
                    continue;
                }
                let w = if unit { 1.0 } else if positive { rng.gen_range(1..=8) as f64 / 2.0 } else { rng.gen_range(0..=8) as f64 / 2.0 };
                edges.push(Edge::new(a, b, 1, w));
            }
        }
        MultigraphSnapshot::new(directed, edges).unwrap()
    };
    let series = if rng.gen_bool(0.5) {
        GraphSeries::Static(snap(rng))
    } else {
        GraphSeries::Timed((0..=length).map(|_| snap(rng)).collect())
    };
    let mut g = GraphTrajectory::default();
    g.insert("d", series);
    MasRun::new(traj, g).unwrap()
}

/// Floyd-Warshall over the snapshot's edges, following direction.
fn all_pairs(g: &MultigraphSnapshot, n: usize) -> Vec<Vec<f64>> {
    let mut d = vec![vec![f64::INFINITY; n + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in g.edges() {
        d[e.src][e.dst] = d[e.src][e.dst].min(e.weight);
        if !g.is_directed() {
            d[e.dst][e.src] = d[e.dst][e.src].min(e.weight);
        }
    }
    for k in 1..=n {
        for i in 1..=n {
            for j in 1..=n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn out_edges(g: &MultigraphSnapshot, a: usize) -> Vec<(usize, f64)> {
    let mut v = Vec::new();
    for e in g.edges() {
        if e.src == a {
            v.push((e.dst, e.weight));
        }
        if !g.is_directed() && e.dst == a && e.src != a {
            v.push((e.src, e.weight));
        }
    }
    v
}

/// Every simple path from `i`, with its weight sum.
fn simple_paths(g: &MultigraphSnapshot, i: usize) -> Vec<(Vec<usize>, f64)> {
    fn go(g: &MultigraphSnapshot, path: &mut Vec<usize>, sum: f64, out: &mut Vec<(Vec<usize>, f64)>) {
        out.push((path.clone(), sum));
        for (b, w) in out_edges(g, *path.last().unwrap()) {
            if !path.contains(&b) {
                path.push(b);
                go(g, path, sum + w, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, &mut vec![i], 0.0, &mut out);
    out
}

fn random_w(rng: &mut ChaCha8Rng) -> WeightInterval {
    let lo = rng.gen_range(0..=6) as f64;
    let hi = if rng.gen_bool(0.15) { f64::INFINITY } else { lo + rng.gen_range(0..=10) as f64 };
    WeightInterval::new(lo, hi).unwrap()
}

fn inner(rng: &mut ChaCha8Rng) -> LocalFormula {
    let cfg = FormulaConfig { tags: vec!["d".into()], ..FormulaConfig::default() };
    random_local(rng, &cfg, 2)
}

#[test]
fn shortest_distances_match_floyd_warshall() {
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=8);
        let directed = rng.gen_bool(0.5);
        let run = distance_run(&mut rng, n, 0, directed, false, false);
        let g = run.snapshot("d", 0).unwrap();
        let ds = shortest_distance_graph(g, n).unwrap();
        let fw = all_pairs(g, n);
        for i in 1..=n {
            let mut got = vec![f64::INFINITY; n + 1];
            for a in ds.adjacent(i, Direction::Out) {
                got[a.other] = a.weight;
            }
            for j in 1..=n {
                assert_eq!(got[j], fw[i][j], "seed {seed} {i}->{j}");
                if !directed {
                    assert_eq!(fw[i][j], fw[j][i]);
                }
                for k in 1..=n {
                    assert!(got[j] <= fw[i][k] + fw[k][j]);
                }
            }
            // brute force over simple paths
            for j in 1..=n {
                let best = simple_paths(g, i).into_iter().filter(|(p, _)| *p.last().unwrap() == j).map(|(_, s)| s).fold(f64::INFINITY, f64::min);
                assert_eq!(got[j], best);
            }
        }
    }
}

fn sastl_direct(run: &MasRun, labels: &LabelMap, psi: &str, w: WeightInterval, cmp: Comparison, c: f64, phi: &LocalFormula, i: usize, t: usize) -> bool {
    let n = run.num_agents();
    let d = all_pairs(run.snapshot("d", t).unwrap(), n);
    let count = (1..=n)
        .filter(|&j| d[i][j].is_finite() && w.contains(d[i][j]) && labels.has(j, psi) && oracle_eval(run, phi, j, t).unwrap())
        .count();
    cmp.holds(count as f64, c)
}

#[test]
fn counting_translation_matches_direct_semantics() {
    let cmps = [Comparison::Le, Comparison::Lt, Comparison::Ge, Comparison::Gt, Comparison::Eq];
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let directed = rng.gen_bool(0.5);
        let len = rng.gen_range(0..=3);
        let base = distance_run(&mut rng, n, len, directed, false, false);
        let run = with_shortest_distance(&base, "d", DS_TAG).unwrap();
        let labels = LabelMap::from_pairs(n, (1..=n).filter(|_| rng.gen_bool(0.6)).map(|j| (j, "H"))).unwrap();
        let i = rng.gen_range(1..=n);
        let run = with_labeled_subgraph(&run, DS_TAG, &labels, "H", i).unwrap();
        let w = random_w(&mut rng);
        let cmp = cmps[rng.gen_range(0..cmps.len())];
        let c = rng.gen_range(-1..=8) as f64 / 2.0;
        let phi = inner(&mut rng);
        let tr = Translator::for_graph(&run, "d").unwrap();
        let f = tr.sastl_count("H", w, CountOp::Sum, cmp, c, phi.clone(), i).unwrap();
        let sig = monitor_global(&run, &f, run.length()).unwrap();
        for t in 0..=run.length() {
            assert_eq!(sig.at(t).unwrap(), sastl_direct(&run, &labels, "H", w, cmp, c, &phi, i, t), "seed {seed}: {f} t {t}");
        }
        // avg with the number of qualifying agents given up front
        let np = 3;
        let avg = tr.sastl_count("H", w, CountOp::Avg { n_prime: Some(np) }, cmp, c, phi.clone(), i).unwrap();
        let sig = monitor_global(&run, &avg, run.length()).unwrap();
        for t in 0..=run.length() {
            assert_eq!(sig.at(t).unwrap(), sastl_direct(&run, &labels, "H", w, cmp, c * np as f64, &phi, i, t));
        }
    }
}

#[test]
fn somewhere_everywhere_match_direct_semantics() {
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let (len, directed) = (rng.gen_range(0..=3), rng.gen_bool(0.5));
        let base = distance_run(&mut rng, n, len, directed, false, false);
        let run = with_shortest_distance(&base, "d", DS_TAG).unwrap();
        let tr = Translator::for_graph(&run, "d").unwrap();
        let w = random_w(&mut rng);
        let phi = inner(&mut rng);
        let i = rng.gen_range(1..=n);
        let some = monitor_global(&run, &tr.sstl(SpatialOp::Somewhere, w, phi.clone(), i), run.length()).unwrap();
        let every = monitor_global(&run, &tr.sstl(SpatialOp::Everywhere, w, phi.clone(), i), run.length()).unwrap();
        let dual = LocalFormula::not(tr.sstl_local(SpatialOp::Somewhere, w, LocalFormula::not(phi.clone())));
        let dual = monitor_local(&run, &dual, i, run.length()).unwrap();
        for t in 0..=run.length() {
            let d = all_pairs(run.snapshot("d", t).unwrap(), n);
            let within: Vec<usize> = (1..=n).filter(|&j| d[i][j].is_finite() && w.contains(d[i][j])).collect();
            let sat = |j: &usize| oracle_eval(&run, &phi, *j, t).unwrap();
            assert_eq!(some.at(t).unwrap(), within.iter().any(sat), "seed {seed}");
            assert_eq!(every.at(t).unwrap(), within.iter().all(sat), "seed {seed}");
            assert_eq!(every.at(t), dual.at(t));
        }
    }
}

fn strel_direct(run: &MasRun, op: &StrelOp, w: WeightInterval, i: usize, t: usize) -> bool {
    let g = run.snapshot("d", t).unwrap();
    let n = run.num_agents();
    let d = all_pairs(g, n);
    let sat = |f: &LocalFormula, j: usize| oracle_eval(run, f, j, t).unwrap();
    simple_paths(g, i).iter().any(|(p, sum)| match op {
        StrelOp::Reach(a, b) => w.contains(*sum) && p[..p.len() - 1].iter().all(|&j| sat(a, j)) && sat(b, *p.last().unwrap()),
        StrelOp::Escape(a) => w.contains(d[i][*p.last().unwrap()]) && p.iter().all(|&j| sat(a, j)),
    })
}

#[test]
fn reach_escape_match_direct_semantics() {
    for seed in 0..150 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let (len, directed) = (rng.gen_range(0..=2), rng.gen_bool(0.5));
        let run = distance_run(&mut rng, n, len, directed, true, false);
        let tr = Translator::for_graph(&run, "d").unwrap();
        let w = random_w(&mut rng);
        let i = rng.gen_range(1..=n);
        let op = if rng.gen_bool(0.5) {
            let a = inner(&mut rng);
            StrelOp::Reach(a, inner(&mut rng))
        } else {
            StrelOp::Escape(inner(&mut rng))
        };
        for t in 0..=run.length() {
            let f = tr.strel(&op, w, i, &run, t).unwrap();
            let sig = monitor_global(&run, &f, run.length()).unwrap();
            assert_eq!(sig.at(t).unwrap(), strel_direct(&run, &op, w, i, t), "seed {seed}: {f}");
        }
    }
}

/// Reach over walks (agents may repeat), by dynamic programming on hop counts.
fn reach_walks(run: &MasRun, a: &LocalFormula, b: &LocalFormula, lo: usize, hi: usize, i: usize, t: usize) -> bool {
    let g = run.snapshot("d", t).unwrap();
    let n = run.num_agents();
    let sat = |f: &LocalFormula, j: usize| oracle_eval(run, f, j, t).unwrap();
    // ok[j]: a walk of the current length from j ends in b with a before
    let mut ok: Vec<bool> = (0..=n).map(|j| j > 0 && sat(b, j)).collect();
    let mut any = lo == 0 && ok[i];
    for k in 1..=hi {
        ok = (0..=n).map(|j| j > 0 && sat(a, j) && out_edges(g, j).iter().any(|(m, _)| ok[*m])).collect();
        if k >= lo && ok[i] {
            any = true;
        }
    }
    any
}

#[test]
fn hop_nesting_agrees_with_traces_on_unit_weights() {
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let (len, directed) = (rng.gen_range(0..=2), rng.gen_bool(0.5));
        let run = distance_run(&mut rng, n, len, directed, true, true);
        let tr = Translator::for_graph(&run, "d").unwrap();
        let lo = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..=3) };
        let hi = lo + rng.gen_range(0..=4);
        let w = WeightInterval::new(lo as f64, if rng.gen_bool(0.2) { f64::INFINITY } else { hi as f64 }).unwrap();
        let a = inner(&mut rng);
        let b = inner(&mut rng);
        let nested = tr.strel_reach_hops(&a, &b, w, n);
        let i = rng.gen_range(1..=n);
        let sig = monitor_local(&run, &nested, i, run.length()).unwrap();
        let op = StrelOp::Reach(a.clone(), b.clone());
        for t in 0..=run.length() {
            let got = sig.at(t).unwrap();
            if lo == 0 {
                assert_eq!(got, strel_direct(&run, &op, w, i, t), "seed {seed}");
            }
            let cap = if w.hi().is_finite() { hi } else { lo + n - 1 };
            assert_eq!(got, reach_walks(&run, &a, &b, lo, cap, i, t), "seed {seed}");
        }
    }
}

proptest! {
    #[test]
    fn traces_are_simple_rooted_and_qualify(seed in any::<u64>(), escape in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let directed = rng.gen_bool(0.5);
        let run = distance_run(&mut rng, n, 0, directed, true, false);
        let g = run.snapshot("d", 0).unwrap();
        let w = random_w(&mut rng);
        let i = rng.gen_range(1..=n);
        let mode = if escape { TraceMode::Escape } else { TraceMode::Reach };
        let d = all_pairs(g, n);
        for tr in enumerate_traces(g, i, w, mode, n).unwrap() {
            let p = tr.agents();
            prop_assert_eq!(p[0], i);
            let mut seen = p.to_vec();
            seen.sort_unstable();
            seen.dedup();
            prop_assert_eq!(seen.len(), p.len());
            let sums: Vec<f64> = p.windows(2).map(|e| out_edges(g, e[0]).iter().filter(|(b, _)| *b == e[1]).map(|x| x.1).fold(f64::INFINITY, f64::min)).collect();
            prop_assert!(sums.iter().all(|s| s.is_finite()));
            match mode {
                TraceMode::Reach => prop_assert!(w.contains(sums.iter().sum())),
                TraceMode::Escape => prop_assert!(w.contains(d[i][*p.last().unwrap()])),
            }
        }
    }
}
