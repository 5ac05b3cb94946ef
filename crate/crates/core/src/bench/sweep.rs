use std::time::Instant;

use crate::error::{Error, Result};
use crate::exact::{max_matching_bipartite, max_matching_general};
use crate::generator::{generate, FamilyKind, GraphFamily, Method};
use crate::matcher::{AlgorithmSpec, GreedyMatcher};
use crate::par::{map_ordered, Execution};
use crate::rng::SeededRng;

/// Largest `n` for which the oracle runs without `force_oracle`.
pub const DEFAULT_ORACLE_LIMIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub family: FamilyKind,
    pub n: usize,
    pub c_grid: Vec<f64>,
    pub algorithms: Vec<AlgorithmSpec>,
    pub trials: u32,
    pub master_seed: u32,
    /// Compute the exact maximum once per graph.
    pub oracle: bool,
    pub oracle_limit: usize,
    pub force_oracle: bool,
    pub method: Method,
}

impl ExperimentConfig {
    /// All six algorithms over `c = 1.0, 1.1, ..., 10.0` with 100 trials.
    pub fn new(family: FamilyKind, n: usize) -> Self {
        ExperimentConfig {
            family,
            n,
            c_grid: default_c_grid(),
            algorithms: AlgorithmSpec::ALL.to_vec(),
            trials: 100,
            master_seed: 0,
            oracle: true,
            oracle_limit: DEFAULT_ORACLE_LIMIT,
            force_oracle: false,
            method: Method::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.c_grid.is_empty() {
            return Err(Error::Config("the c grid is empty".into()));
        }
        if let Some(c) = self.c_grid.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::Config(format!("c values must be positive, got {c}")));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms selected".into()));
        }
        if self.oracle && !self.force_oracle && self.n > self.oracle_limit {
            return Err(Error::Config(format!(
                "oracle requested for n = {} above the limit {}; pass force_oracle to override",
                self.n, self.oracle_limit
            )));
        }
        for &c in &self.c_grid {
            GraphFamily::new(self.family, self.n, c).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }
}

/// `c = 1 + 0.1 i` for `i = 0..=90`.
pub fn default_c_grid() -> Vec<f64> {
    (0..=90).map(|i| (10 + i) as f64 / 10.0).collect()
}

/// Inclusive arithmetic grid `from, from + step, ...` up to `to`, each value
/// rounded to 9 decimals so that printed values read back exactly.
pub fn c_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    let valid = step > 0.0 && from > 0.0 && to >= from && to.is_finite();
    if !valid {
        return Err(Error::Config(format!(
            "bad c range: from {from} to {to} step {step}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| ((from + k as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

/// Measurements of one algorithm on one generated graph.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub family: FamilyKind,
    pub n: usize,
    pub c: f64,
    pub algorithm: AlgorithmSpec,
    pub trial_index: u32,
    /// Seed the graph was generated from.
    pub seed: u32,
    pub m_edges: usize,
    pub matching_size: usize,
    pub oracle_size: Option<usize>,
    pub o1: u64,
    pub o2: u64,
    pub h: u64,
    pub wall_time_seconds: f64,
}

impl TrialRecord {
    pub fn lost_edges(&self) -> Option<usize> {
        self.oracle_size.map(|o| o.saturating_sub(self.matching_size))
    }
}

fn mix32(mut x: u32) -> u32 {
    x ^= x >> 16;
    x = x.wrapping_mul(0x7feb_352d);
    x ^= x >> 15;
    x = x.wrapping_mul(0x846c_a68b);
    x ^ (x >> 16)
}

/// Seed of the graph for grid cell `c_index`, trial `trial`.
pub fn graph_seed(master_seed: u32, c_index: usize, trial: u32) -> u32 {
    master_seed
        .wrapping_add(trial.wrapping_mul(1_000_003))
        .wrapping_add(mix32(c_index as u32))
}

/// Seed of the matcher's generator for `spec` on the graph seeded by `graph_seed`.
pub fn algorithm_seed(graph_seed: u32, spec: AlgorithmSpec) -> u32 {
    mix32(graph_seed ^ mix32(0x9e37_79b9u32.wrapping_mul(spec.tag() + 1)))
}

/// Generates one graph, scores it once with the oracle, and runs every
/// configured algorithm on a fresh copy.
pub fn run_trial(cfg: &ExperimentConfig, c_index: usize, trial: u32) -> Result<Vec<TrialRecord>> {
    let c = cfg.c_grid[c_index];
    let family = GraphFamily::new(cfg.family, cfg.n, c)?;
    let seed = graph_seed(cfg.master_seed, c_index, trial);
    let graph = generate(&family, &mut SeededRng::new(seed), cfg.method)?;
    let oracle_size = if cfg.oracle {
        Some(match family.left_size() {
            Some(left) => max_matching_bipartite(&graph, left)?.len(),
            None => max_matching_general(&graph).len(),
        })
    } else {
        None
    };

    let mut out = Vec::with_capacity(cfg.algorithms.len());
    for &spec in &cfg.algorithms {
        let matcher = GreedyMatcher::new(
            graph.clone(),
            spec,
            SeededRng::new(algorithm_seed(seed, spec)),
        );
        let start = Instant::now();
        let (matching, counters) = matcher.solve()?;
        let wall_time_seconds = start.elapsed().as_secs_f64();

        matching.validate(&graph)?;
        if let Some(best) = oracle_size {
            if matching.len() > best {
                return Err(Error::Internal(format!(
                    "{spec} found {} edges but the oracle only {best}",
                    matching.len()
                )));
            }
        }
        out.push(TrialRecord {
            family: cfg.family,
            n: cfg.n,
            c,
            algorithm: spec,
            trial_index: trial,
            seed,
            m_edges: graph.edge_count(),
            matching_size: matching.len(),
            oracle_size,
            o1: counters.o1,
            o2: counters.o2,
            h: counters.h,
            wall_time_seconds,
        });
    }
    Ok(out)
}

/// Runs the sweep with the default [`Execution`].
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    run_sweep_with(cfg, Execution::default())
}

/// Runs every `(c, trial)` cell. Records come out ordered by `c`, then trial,
/// then algorithm, regardless of how cells were scheduled.
pub fn run_sweep_with(cfg: &ExperimentConfig, exec: Execution) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let cells: Vec<(usize, u32)> = (0..cfg.c_grid.len())
        .flat_map(|ci| (0..cfg.trials).map(move |t| (ci, t)))
        .collect();
    let results = map_ordered(cells, exec, |(ci, t)| run_trial(cfg, ci, t));
    let mut records = Vec::with_capacity(results.len() * cfg.algorithms.len());
    for batch in results {
        records.extend(batch?);
    }
    Ok(records)
}
