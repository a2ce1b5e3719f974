//! Fill-until-crisis experiments for cascade hash tables.
//!
//! [`fill_until_crisis`] streams distinct pseudo-random 8-byte keys into a
//! table until the first insert that cannot find a free slot, and records the
//! load factor and per-level occupancy at that instant. [`sweep`] repeats
//! this across level counts and seeds. The [`analysis`] module holds the
//! closed-form crisis-rate model, and [`report`] renders results as an
//! aligned table, CSV or JSON.

pub mod analysis;
mod experiment;
pub mod report;

pub use analysis::{crisis_rate_estimate, equivalent_single_table_probes};
pub use experiment::{
    fill_table_until_crisis, fill_until_crisis, key_stream_seed, sweep, trial_seed, FillReport,
    KeyStream, SweepReport, SweepRow, SweepSummary, DEFAULT_M_VALUES,
};
pub use report::{emit_fill, emit_sweep, parse_csv, CsvRow, Format};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Table(#[from] cascadehash::CascadeError),
    #[error("fill-until-crisis needs a table that reports crises instead of growing")]
    GrowingTable,
    #[error("{0}")]
    Usage(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
