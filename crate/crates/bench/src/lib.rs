//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stlgo::random::{random_local, random_run, FormulaConfig, RunConfig};
use stlgo::{LocalFormula, MasRun};

/// Last monitored step of the drone benchmarks.
pub const HORIZON: usize = 80;

/// A random run with `num_agents` agents and `length + 1` samples.
pub fn random_fixture(seed: u64, num_agents: usize, length: usize) -> MasRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_run(&mut rng, &RunConfig { num_agents, length, ..RunConfig::default() })
}

/// `count` random formulas of the given depth over the fixture's tags.
pub fn random_formulas(seed: u64, count: usize, depth: usize) -> Vec<LocalFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = FormulaConfig::default();
    (0..count).map(|_| random_local(&mut rng, &cfg, depth)).collect()
}
