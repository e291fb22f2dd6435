use std::path::PathBuf;

/// Errors from the benchmark harness: configuration, I/O, CSV schema, and
/// aggregation failures, plus anything propagated from the core library.
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// A benchmark configuration value is unusable.
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },

    /// Reading or writing a file failed.
    #[error("i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A CSV file does not match the expected schema. Line numbers are
    /// 1-based and count the header.
    #[error("csv schema mismatch at line {line}: {reason}")]
    SchemaMismatch { line: usize, reason: String },

    /// Aggregation was asked to summarize an empty group of records.
    #[error("cannot aggregate an empty group")]
    EmptyGroup,

    /// An error propagated from the geometry/criteria library.
    #[error(transparent)]
    Core(#[from] epipolar_core::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;
