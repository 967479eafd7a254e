//! Experiment harness behind the `trs` binary: method dispatch, convergence
//! rate classification, basin experiments, benchmarking and the gap
//! demonstration, all exposed as a library so the acceptance suite can drive
//! them directly.

pub mod basin;
pub mod bench;
pub mod gap_demo;
pub mod method;
pub mod rate;
pub mod report;

use trs_core::{OracleConfig, TrsError};

/// Oracle configuration honoring the `TRS_DENSE_LIMIT` environment override.
pub fn oracle_config_from_env() -> OracleConfig {
    let mut cfg = OracleConfig::default();
    if let Ok(v) = std::env::var("TRS_DENSE_LIMIT") {
        if let Ok(limit) = v.parse::<usize>() {
            cfg.dense_limit = limit;
        }
    }
    cfg
}

/// Process exit code for an error, one per failure family.
pub fn exit_code(err: &TrsError) -> i32 {
    match err {
        TrsError::Parse { .. } => 2,
        TrsError::InvalidConfig(_) | TrsError::InvalidInput(_) | TrsError::DimensionMismatch { .. } => 3,
        TrsError::SolverAnomaly(_) => 4,
        TrsError::Capability(_) => 5,
    }
}
