use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CascadeError, ConfigError};
use crate::hashing::{derive_pair, level_seeds, Probes};
use crate::sizing::{is_prime, ladder_sizes, smallest_prime_at_least};

/// Total probes allowed per insert or lookup unless configured otherwise.
pub const DEFAULT_PROBE_BUDGET: usize = 12;

// 3 * 2^61 is the largest ladder base that fits in a u64.
const MAX_BASE_EXPONENT: u32 = 61;

/// Encodes an integer key as its 8 little-endian bytes.
#[inline]
pub fn u64_key(key: u64) -> [u8; 8] {
    key.to_le_bytes()
}

/// What an insert does when every probe lands on an occupied slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GrowthPolicy {
    /// Return [`InsertOutcome::Crisis`] and leave the table untouched.
    #[default]
    ReportCrisis,
    /// Enlarge and rehash, then complete the insert.
    GrowOnCrisis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CascadeConfig {
    /// Number of cascaded levels, `M`.
    pub levels: usize,
    /// Total probes per operation, `B`. Must be a multiple of `levels`.
    pub probe_budget: usize,
    /// Level 1 holds the smallest prime `>= 3 * 2^base_exponent` slots.
    pub base_exponent: u32,
    /// Root seed from which every level's hash seeds are derived.
    pub seed: u64,
    pub growth: GrowthPolicy,
}

impl CascadeConfig {
    /// A configuration with the default budget of 12 probes, seed 0 and
    /// [`GrowthPolicy::ReportCrisis`].
    pub fn new(levels: usize, base_exponent: u32) -> Self {
        CascadeConfig {
            levels,
            probe_budget: DEFAULT_PROBE_BUDGET,
            base_exponent,
            seed: 0,
            growth: GrowthPolicy::ReportCrisis,
        }
    }

    pub fn with_probe_budget(mut self, probe_budget: usize) -> Self {
        self.probe_budget = probe_budget;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_growth(mut self, growth: GrowthPolicy) -> Self {
        self.growth = growth;
        self
    }

    /// Probes spent in each level, `p = B / M`.
    pub fn probes_per_level(&self) -> usize {
        self.probe_budget / self.levels
    }

    /// Checks the level/budget constraints shared by every sizing mode.
    fn validate_budget(&self) -> Result<(), ConfigError> {
        if self.levels == 0 {
            return Err(ConfigError::NoLevels);
        }
        if self.probe_budget == 0 || !self.probe_budget.is_multiple_of(self.levels) {
            return Err(ConfigError::BudgetNotDivisible {
                budget: self.probe_budget,
                levels: self.levels,
            });
        }
        Ok(())
    }

    /// Checks every constraint required to build a ladder-sized table.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_budget()?;
        if (self.base_exponent as usize) + 1 < self.levels {
            return Err(ConfigError::ExponentTooSmall {
                base_exponent: self.base_exponent,
                levels: self.levels,
            });
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Entry {
    key: Box<[u8]>,
    value: Box<[u8]>,
}

/// A borrowed view of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot<'a> {
    Empty,
    Occupied { key: &'a [u8], value: &'a [u8] },
}

/// One prime-sized open-addressing table within the cascade.
#[derive(Clone, PartialEq, Eq)]
pub struct Level {
    index: usize,
    seeds: (u64, u64),
    count: usize,
    slots: Vec<Option<Entry>>,
}

impl Level {
    fn with_size(index: usize, size: usize, seeds: (u64, u64)) -> Result<Self, CascadeError> {
        let mut slots = Vec::new();
        slots
            .try_reserve_exact(size)
            .map_err(|_| CascadeError::CapacityOverflow)?;
        slots.resize_with(size, || None);
        Ok(Level {
            index,
            seeds,
            count: 0,
            slots,
        })
    }

    /// 1-based position in the cascade.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Slot count `N_i`.
    pub fn size(&self) -> usize {
        self.slots.len()
    }

    /// Occupied slot count `n_i`.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Seeds of the start and stride hash functions.
    pub fn seeds(&self) -> (u64, u64) {
        self.seeds
    }

    /// # Panics
    ///
    /// Panics if `index >= self.size()`.
    pub fn slot(&self, index: usize) -> Slot<'_> {
        match &self.slots[index] {
            None => Slot::Empty,
            Some(entry) => Slot::Occupied {
                key: &entry.key,
                value: &entry.value,
            },
        }
    }

    /// Occupied entries in slot order.
    pub fn entries(&self) -> impl Iterator<Item = (&[u8], &[u8])> + '_ {
        self.slots
            .iter()
            .flatten()
            .map(|e| (&e.key[..], &e.value[..]))
    }

    #[inline]
    fn probes(&self, key: &[u8], count: usize) -> Probes {
        derive_pair(key, self.seeds, self.slots.len()).probes(self.slots.len(), count)
    }

    pub fn stats(&self) -> LevelStats {
        LevelStats::new(self.index, self.count, self.size())
    }
}

/// Occupancy of one level, `n_i / N_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: usize,
    pub occupied: usize,
    pub capacity: usize,
    /// Always `occupied / capacity`.
    pub occupancy: f64,
}

impl LevelStats {
    pub fn new(level: usize, occupied: usize, capacity: usize) -> Self {
        LevelStats {
            level,
            occupied,
            capacity,
            occupancy: occupied as f64 / capacity as f64,
        }
    }
}

/// Per-level occupancy plus the global load factor `L = n / sum(N_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableStats {
    pub levels: Vec<LevelStats>,
    pub item_count: usize,
    pub total_capacity: usize,
    pub load_factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The key was new and now occupies a slot in `level` (1-based).
    Inserted { level: usize, probes_used: usize },
    /// The key was already present; its value was replaced in place.
    Updated { level: usize, probes_used: usize },
    /// Every probe in every level hit a slot holding a different key.
    Crisis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sizing {
    Ladder,
    Explicit(Vec<usize>),
}

enum Placement {
    Existing { level: usize, slot: usize, probes: usize },
    Vacant { level: usize, slot: usize, probes: usize },
    Full,
}

/// An `M`-level cascade of limited double-hashing tables.
///
/// Not internally synchronized: mutation needs `&mut self`, and shared
/// references may be read from any number of threads.
#[derive(Clone, PartialEq, Eq)]
pub struct CascadeTable {
    config: CascadeConfig,
    levels: Vec<Level>,
    item_count: usize,
    generation: u64,
    sizing: Sizing,
}

impl CascadeTable {
    /// Builds an empty table whose level sizes follow the prime ladder down
    /// from `config.base_exponent`.
    pub fn new(config: CascadeConfig) -> Result<Self, CascadeError> {
        config.validate()?;
        if config.base_exponent > MAX_BASE_EXPONENT {
            return Err(CascadeError::CapacityOverflow);
        }
        let sizes = ladder_sizes(config.base_exponent, config.levels)?
            .into_iter()
            .map(|s| usize::try_from(s).map_err(|_| CascadeError::CapacityOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        Self::build(config, &sizes, 0, Sizing::Ladder)
    }

    /// Builds an empty table with explicit level sizes instead of the ladder.
    ///
    /// Meant for small exhaustive tests. Every size must be prime and at
    /// least `B / M`. `config.base_exponent` is carried along but does not
    /// influence the sizes; growing doubles each size to the next prime.
    pub fn with_level_sizes(config: CascadeConfig, sizes: &[usize]) -> Result<Self, CascadeError> {
        config.validate_budget()?;
        if sizes.len() != config.levels {
            return Err(ConfigError::SizeCountMismatch {
                expected: config.levels,
                actual: sizes.len(),
            }
            .into());
        }
        if let Some(&size) = sizes.iter().find(|&&s| !is_prime(s as u64)) {
            return Err(ConfigError::SizeNotPrime { size }.into());
        }
        Self::build(config, sizes, 0, Sizing::Explicit(sizes.to_vec()))
    }

    fn build(
        config: CascadeConfig,
        sizes: &[usize],
        generation: u64,
        sizing: Sizing,
    ) -> Result<Self, CascadeError> {
        let probes = config.probes_per_level();
        let mut levels = Vec::with_capacity(sizes.len());
        for (i, &size) in sizes.iter().enumerate() {
            let index = i + 1;
            if size < probes || size < 2 {
                return Err(ConfigError::ProbesExceedSize {
                    level: index,
                    size,
                    probes,
                }
                .into());
            }
            levels.push(Level::with_size(
                index,
                size,
                level_seeds(config.seed, index, generation),
            )?);
        }
        Ok(CascadeTable {
            config,
            levels,
            item_count: 0,
            generation,
            sizing,
        })
    }

    pub fn config(&self) -> &CascadeConfig {
        &self.config
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Number of stored keys, `n`.
    pub fn len(&self) -> usize {
        self.item_count
    }

    pub fn is_empty(&self) -> bool {
        self.item_count == 0
    }

    /// Number of grows this table has been through.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// Total slot count across all levels, `sum(N_i)`.
    pub fn capacity(&self) -> usize {
        self.levels.iter().map(Level::size).sum()
    }

    /// The `p` slot indices probed for `key` in level `level_index` (1-based).
    pub fn probe_sequence(&self, level_index: usize, key: &[u8]) -> Result<Vec<usize>, CascadeError> {
        if key.is_empty() {
            return Err(CascadeError::EmptyKey);
        }
        let level = level_index
            .checked_sub(1)
            .and_then(|i| self.levels.get(i))
            .ok_or(CascadeError::LevelOutOfRange {
                index: level_index,
                levels: self.levels.len(),
            })?;
        Ok(level.probes(key, self.config.probes_per_level()).collect())
    }

    /// Walks the level-major probe order until the key or an empty slot
    /// turns up. Never looks at more than `B` slots.
    fn locate(&self, key: &[u8]) -> Placement {
        let per_level = self.config.probes_per_level();
        let mut probes = 0;
        for (li, level) in self.levels.iter().enumerate() {
            for slot in level.probes(key, per_level) {
                probes += 1;
                match &level.slots[slot] {
                    None => {
                        return Placement::Vacant {
                            level: li,
                            slot,
                            probes,
                        }
                    }
                    Some(entry) if *entry.key == *key => {
                        return Placement::Existing {
                            level: li,
                            slot,
                            probes,
                        }
                    }
                    Some(_) => {}
                }
            }
        }
        debug_assert!(probes <= self.config.probe_budget);
        Placement::Full
    }

    /// Inserts or overwrites `key`.
    ///
    /// Returns [`InsertOutcome::Crisis`] only under
    /// [`GrowthPolicy::ReportCrisis`]; in that case the table is unchanged.
    /// Under [`GrowthPolicy::GrowOnCrisis`] the table grows until the key
    /// fits, which can fail only with [`CascadeError::CapacityOverflow`].
    pub fn insert(&mut self, key: &[u8], value: &[u8]) -> Result<InsertOutcome, CascadeError> {
        if key.is_empty() {
            return Err(CascadeError::EmptyKey);
        }
        loop {
            match self.locate(key) {
                Placement::Existing { level, slot, probes } => {
                    let entry = self.levels[level].slots[slot].as_mut().unwrap();
                    entry.value = value.into();
                    return Ok(InsertOutcome::Updated {
                        level: level + 1,
                        probes_used: probes,
                    });
                }
                Placement::Vacant { level, slot, probes } => {
                    self.put(level, slot, key.into(), value.into());
                    return Ok(InsertOutcome::Inserted {
                        level: level + 1,
                        probes_used: probes,
                    });
                }
                Placement::Full => match self.config.growth {
                    GrowthPolicy::ReportCrisis => return Ok(InsertOutcome::Crisis),
                    GrowthPolicy::GrowOnCrisis => self.grow()?,
                },
            }
        }
    }

    fn put(&mut self, level: usize, slot: usize, key: Box<[u8]>, value: Box<[u8]>) {
        let lvl = &mut self.levels[level];
        debug_assert!(lvl.slots[slot].is_none());
        lvl.slots[slot] = Some(Entry { key, value });
        lvl.count += 1;
        self.item_count += 1;
    }

    pub fn lookup(&self, key: &[u8]) -> Option<&[u8]> {
        self.lookup_traced(key).0
    }

    /// Like [`lookup`](Self::lookup), also returning the number of slots
    /// examined.
    pub fn lookup_traced(&self, key: &[u8]) -> (Option<&[u8]>, usize) {
        if key.is_empty() {
            return (None, 0);
        }
        match self.locate(key) {
            Placement::Existing { level, slot, probes } => {
                let entry = self.levels[level].slots[slot].as_ref().unwrap();
                (Some(&entry.value), probes)
            }
            Placement::Vacant { probes, .. } => (None, probes),
            Placement::Full => (None, self.config.probe_budget),
        }
    }

    pub fn contains(&self, key: &[u8]) -> bool {
        self.lookup(key).is_some()
    }

    /// All stored pairs, level by level in slot order.
    pub fn entries(&self) -> impl Iterator<Item = (&[u8], &[u8])> + '_ {
        self.levels.iter().flat_map(Level::entries)
    }

    pub fn stats(&self) -> TableStats {
        let total_capacity = self.capacity();
        TableStats {
            levels: self.levels.iter().map(Level::stats).collect(),
            item_count: self.item_count,
            total_capacity,
            load_factor: self.item_count as f64 / total_capacity as f64,
        }
    }

    /// Returns a rehashed copy at roughly double the capacity.
    ///
    /// The copy has base exponent `k + 1` and fresh level seeds. If the
    /// reinsertion itself runs into a crisis, the copy is rebuilt at
    /// `k + 2`, and so on.
    pub fn grown(&self) -> Result<CascadeTable, CascadeError> {
        let mut step = 1u32;
        loop {
            let base_exponent = self
                .config
                .base_exponent
                .checked_add(step)
                .filter(|&k| k <= MAX_BASE_EXPONENT)
                .ok_or(CascadeError::CapacityOverflow)?;
            let config = CascadeConfig {
                base_exponent,
                ..self.config.clone()
            };
            let generation = self.generation + u64::from(step);
            let mut next = match &self.sizing {
                Sizing::Ladder => {
                    let sizes = ladder_sizes(base_exponent, config.levels)?
                        .into_iter()
                        .map(|s| usize::try_from(s).map_err(|_| CascadeError::CapacityOverflow))
                        .collect::<Result<Vec<_>, _>>()?;
                    Self::build(config, &sizes, generation, Sizing::Ladder)?
                }
                Sizing::Explicit(original) => {
                    let sizes = original
                        .iter()
                        .map(|&s| doubled_prime(s, step))
                        .collect::<Result<Vec<_>, _>>()?;
                    Self::build(config, &sizes, generation, Sizing::Explicit(original.clone()))?
                }
            };
            if next.absorb(self) {
                return Ok(next);
            }
            step += 1;
        }
    }

    /// Replaces the table with [`grown`](Self::grown).
    pub fn grow(&mut self) -> Result<(), CascadeError> {
        *self = self.grown()?;
        Ok(())
    }

    // Reinserts every pair of `old`; false on the first crisis.
    fn absorb(&mut self, old: &CascadeTable) -> bool {
        for level in &old.levels {
            for entry in level.slots.iter().flatten() {
                match self.locate(&entry.key) {
                    Placement::Vacant { level, slot, .. } => {
                        self.put(level, slot, entry.key.clone(), entry.value.clone())
                    }
                    Placement::Existing { .. } => unreachable!("keys are unique"),
                    Placement::Full => return false,
                }
            }
        }
        true
    }
}

fn doubled_prime(size: usize, doublings: u32) -> Result<usize, CascadeError> {
    let scaled = (size as u64)
        .checked_shl(doublings)
        .filter(|s| s >> doublings == size as u64)
        .ok_or(CascadeError::CapacityOverflow)?;
    let prime = smallest_prime_at_least(scaled)?;
    usize::try_from(prime).map_err(|_| CascadeError::CapacityOverflow)
}

impl fmt::Debug for CascadeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CascadeTable")
            .field("config", &self.config)
            .field("levels", &self.levels)
            .field("item_count", &self.item_count)
            .field("generation", &self.generation)
            .finish()
    }
}

impl fmt::Debug for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Level {}: {}/{}", self.index, self.count, self.size())
    }
}
