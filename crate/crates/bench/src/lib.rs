//! Benchmark harness for `skiptour`.
//!
//! Each cell of a run is one `(batch size, thread count)` pair. A cell
//! rebuilds the structure for every trial, times only the batch operations,
//! and reports the median over trials.

mod config;
mod graph;
mod report;
mod run;

pub use config::{default_threads, BenchConfig, CellStatus, GraphKind, Op, Structure, Workload};
pub use graph::build_graph;
pub use report::{emit_csv, median, read_csv, write_csv, BenchRecord, HEADER};
pub use run::run_bench;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Structure(#[from] skiptour::Error),
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/benchmarking.md")]
mod book {}
