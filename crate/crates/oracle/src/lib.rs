//! Reference implementations for testing cascade tables.
//!
//! Nothing here is meant for production use: [`ReferenceMap`] wraps the
//! standard library's map as ground truth for differential runs, and
//! [`exhaustive_crisis_check`] inspects slots directly to confirm that a
//! reported crisis really means every probed slot was taken.

use std::collections::HashMap;

use cascadehash::{mix64, CascadeTable, InsertOutcome, Slot};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// The cascade table hit a crisis, so the run says nothing about lookup
    /// agreement. Regenerate the sequence or size the table larger.
    #[error("cascade table reported a crisis at operation {0}")]
    Crisis(usize),
    #[error(transparent)]
    Table(#[from] cascadehash::CascadeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    Insert(Vec<u8>, Vec<u8>),
    Lookup(Vec<u8>),
    Contains(Vec<u8>),
}

/// Ground-truth map from key bytes to value bytes.
#[derive(Debug, Default, Clone)]
pub struct ReferenceMap {
    map: HashMap<Vec<u8>, Vec<u8>>,
}

impl ReferenceMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: &[u8], value: &[u8]) -> Option<Vec<u8>> {
        self.map.insert(key.to_vec(), value.to_vec())
    }

    pub fn lookup(&self, key: &[u8]) -> Option<&[u8]> {
        self.map.get(key).map(Vec::as_slice)
    }

    pub fn contains(&self, key: &[u8]) -> bool {
        self.map.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Runs `ops` against `table` and a fresh [`ReferenceMap`] in lockstep.
///
/// Returns `Ok(true)` when every insert outcome, lookup and contains result
/// agrees, and the table's item count tracks the map's length.
pub fn differential_run(table: &mut CascadeTable, ops: &[Op]) -> Result<bool, OracleError> {
    let mut reference = ReferenceMap::new();
    for (i, op) in ops.iter().enumerate() {
        let agrees = match op {
            Op::Insert(k, v) => {
                let was_present = reference.insert(k, v).is_some();
                match table.insert(k, v)? {
                    InsertOutcome::Crisis => return Err(OracleError::Crisis(i)),
                    InsertOutcome::Inserted { .. } => !was_present,
                    InsertOutcome::Updated { .. } => was_present,
                }
            }
            Op::Lookup(k) => table.lookup(k) == reference.lookup(k),
            Op::Contains(k) => table.contains(k) == reference.contains(k),
        };
        if !agrees || table.len() != reference.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A deterministic mix of inserts, lookups and contains checks over a key
/// space of `key_space` distinct keys, so repeats and misses both occur.
pub fn random_ops(seed: u64, count: usize, key_space: u64) -> Vec<Op> {
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(state)
    };
    (0..count)
        .map(|_| {
            let choice = next() % 4;
            let key = (next() % key_space.max(1)).to_le_bytes().to_vec();
            match choice {
                0 | 1 => {
                    let len = (next() % 6) as usize;
                    let value = next().to_le_bytes()[..len].to_vec();
                    Op::Insert(key, value)
                }
                2 => Op::Lookup(key),
                _ => Op::Contains(key),
            }
        })
        .collect()
}

/// Largest total capacity [`exhaustive_crisis_check`] will inspect.
pub const EXHAUSTIVE_LIMIT: usize = 64;

/// Inserts `key` and checks the outcome against direct slot inspection.
///
/// True iff the insert reported a crisis exactly when every one of the key's
/// `B` probe slots held some other key beforehand. `table` must be small
/// (at most [`EXHAUSTIVE_LIMIT`] slots) and must report crises rather than
/// grow.
pub fn exhaustive_crisis_check(table: &mut CascadeTable, key: &[u8]) -> bool {
    assert!(table.capacity() <= EXHAUSTIVE_LIMIT, "table too large to enumerate");
    let mut probed = 0;
    let mut every_probe_taken = true;
    for level in table.levels() {
        let sequence = table
            .probe_sequence(level.index(), key)
            .expect("valid level and key");
        probed += sequence.len();
        for slot in sequence {
            match level.slot(slot) {
                Slot::Occupied { key: other, .. } if other != key => {}
                _ => every_probe_taken = false,
            }
        }
    }
    assert_eq!(probed, table.config().probe_budget);
    let before = table.clone();
    let crisis = table.insert(key, b"") == Ok(InsertOutcome::Crisis);
    if crisis && *table != before {
        return false;
    }
    crisis == every_probe_taken
}
