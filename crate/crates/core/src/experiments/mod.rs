//! Sweeps, result files and the dense cross-check.

pub mod oracle;
pub mod output;
pub mod sweep;

pub use oracle::{dense_negativity_oracle, oracle_check, OracleReport};
pub use output::{read_aggregates, read_manifest, read_records, write_results, Manifest};
pub use sweep::{
    run_sweep, run_sweep_sequential, AggregateRow, SweepConfig, SweepOutput, SweepRecord,
};
