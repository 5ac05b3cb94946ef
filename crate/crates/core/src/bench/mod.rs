//! Experiment harness: sweeps over `(c, trial)` cells, per-trial records,
//! per-cell aggregates and their CSV form.

mod aggregate;
mod records;
mod sweep;

pub use crate::par::Execution;
pub use aggregate::{aggregate, AggregateRecord};
pub use records::{
    format_real, read_aggregates_csv, read_trials_csv, write_aggregates_csv, write_trials_csv,
    AGGREGATE_COLUMNS, TRIAL_COLUMNS,
};
pub use sweep::{
    algorithm_seed, c_grid, default_c_grid, graph_seed, run_sweep, run_sweep_with, run_trial,
    ExperimentConfig, TrialRecord, DEFAULT_ORACLE_LIMIT,
};
