//! Sweeps over the Grover simulators that reproduce runtime scaling,
//! precision fidelity and shot-count behaviour, with CSV output.
//!
//! ```no_run
//! use itergrover_bench::{emit_csv, run_sweep, BenchConfig, Experiment};
//!
//! let config = BenchConfig::new(Experiment::Amplitude).with_n_range(2, 8).validate()?;
//! let records = run_sweep(&config)?;
//! emit_csv(&records, std::path::Path::new("amplitude.csv"))?;
//! # Ok::<(), itergrover_bench::BenchError>(())
//! ```

pub mod config;
pub mod record;
pub mod sweep;

pub use config::{BenchConfig, Experiment, MarkedPolicy};
pub use record::{emit_csv, read_csv, write_csv, BenchRecord, Status};
pub use sweep::{median, run_amplitude_sweep, run_runtime_sweep, run_shot_sweep, run_sweep};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("parse error: {0}")]
    Parse(String),
}
