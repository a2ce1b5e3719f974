//! Cascade hash tables.
//!
//! A cascade hash table is a stack of `M` open-addressing tables ("levels"),
//! each roughly half the size of the one before it. Every level uses limited
//! double hashing, and all levels share one probe budget `B`, split evenly as
//! `p = B / M` probes per level. An insert that finds no free slot in level 1
//! falls through to level 2, and so on. When every probe in every level hits
//! an occupied slot the table is in *crisis*; depending on the configured
//! [`GrowthPolicy`] the crisis is reported to the caller or the table is
//! enlarged and rehashed.
//!
//! Insert and lookup both examine at most `B` slots, so the worst case is
//! constant regardless of how full the table is.
//!
//! ```
//! use cascadehash::{CascadeConfig, CascadeTable, InsertOutcome};
//!
//! let mut table = CascadeTable::new(CascadeConfig::new(3, 10)).unwrap();
//! let outcome = table.insert(b"apple", b"red").unwrap();
//! assert!(matches!(outcome, InsertOutcome::Inserted { level: 1, probes_used: 1 }));
//! assert_eq!(table.lookup(b"apple"), Some(&b"red"[..]));
//! ```

mod error;
pub mod hashing;
pub mod sizing;
mod table;

pub use error::{CascadeError, ConfigError};
pub use hashing::{derive_pair, hash_bytes, level_seeds, mix64, HashPair};
pub use sizing::{is_prime, ladder_entry, ladder_sizes, smallest_prime_at_least};
pub use table::{
    u64_key, CascadeConfig, CascadeTable, GrowthPolicy, InsertOutcome, Level, LevelStats, Slot,
    TableStats, DEFAULT_PROBE_BUDGET,
};
