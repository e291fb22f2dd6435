//! Benchmark harness for the epipolar error criteria.
//!
//! Two experiments are exposed as library functions and through the `bench`
//! binary: the generator success-rate sweep (how reliably a correspondence
//! with a prescribed reprojection error can be manufactured at each level)
//! and the criteria sweep (accuracy and cost of the approximate criteria
//! against the exact correction). Results are written as flat CSV record
//! streams with optional per-level aggregation and gnuplot scripts.

pub mod aggregate;
pub mod csv_io;
pub mod error;
pub mod experiments;
pub mod gnuplot;
pub mod rng;

pub use aggregate::{aggregate_criteria, aggregate_success, AggregateRow};
pub use error::{BenchError, Result};
pub use experiments::{
    decade_levels, run_criteria, run_success_rate, CriteriaConfig, CriteriaRun, LevelAudit,
    MeasurementRecord, SuccessRateConfig, SuccessRateRecord, Variant,
};
