use std::time::{Duration, Instant};

use cascadehash::{mix64, CascadeConfig, CascadeTable, GrowthPolicy, InsertOutcome, LevelStats};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Level counts that divide the default budget of 12.
pub const DEFAULT_M_VALUES: [usize; 6] = [1, 2, 3, 4, 6, 12];

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const KEY_STREAM_SALT: u64 = 0x6B65_7973_7472_6561;

/// SplitMix64 sequence of 64-bit keys.
///
/// The state advances by a constant odd increment and each output is a
/// bijective mix of the state, so no key repeats within 2^64 draws.
#[derive(Debug, Clone)]
pub struct KeyStream {
    state: u64,
}

impl KeyStream {
    pub fn new(seed: u64) -> Self {
        KeyStream { state: seed }
    }
}

impl Iterator for KeyStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        Some(mix64(self.state))
    }
}

/// Key stream seed paired with a table seed.
pub fn key_stream_seed(table_seed: u64) -> u64 {
    mix64(table_seed ^ KEY_STREAM_SALT)
}

/// Table seed for trial `trial` of a sweep rooted at `root_seed`.
pub fn trial_seed(root_seed: u64, trial: usize) -> u64 {
    mix64(root_seed.wrapping_add(trial as u64))
}

/// The state of a table at its first crisis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FillReport {
    /// `M`
    pub levels: usize,
    pub probe_budget: usize,
    pub base_exponent: u32,
    /// `N`, total slots across levels.
    pub total_capacity: usize,
    /// `n*`, distinct keys stored when the crisis hit.
    pub items_at_crisis: usize,
    /// `L = n* / N`
    pub load_factor: f64,
    pub level_stats: Vec<LevelStats>,
    pub seed: u64,
    pub key_stream_seed: u64,
    /// Wall-clock fill time. Not serialized, so reports stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Builds a ladder-sized table from `config` and fills it until the first
/// crisis.
pub fn fill_until_crisis(config: &CascadeConfig, key_stream_seed: u64) -> Result<FillReport, HarnessError> {
    if config.growth != GrowthPolicy::ReportCrisis {
        return Err(HarnessError::GrowingTable);
    }
    fill_table_until_crisis(CascadeTable::new(config.clone())?, key_stream_seed)
}

/// Fills an empty (or partially filled) table with keys from
/// `KeyStream::new(key_stream_seed)` until an insert reports a crisis.
///
/// Keys already present are skipped and do not count toward `n*`.
pub fn fill_table_until_crisis(
    mut table: CascadeTable,
    key_stream_seed: u64,
) -> Result<FillReport, HarnessError> {
    if table.config().growth != GrowthPolicy::ReportCrisis {
        return Err(HarnessError::GrowingTable);
    }
    let start = Instant::now();
    for key in KeyStream::new(key_stream_seed) {
        match table.insert(&key.to_le_bytes(), &[])? {
            InsertOutcome::Inserted { .. } | InsertOutcome::Updated { .. } => {}
            InsertOutcome::Crisis => break,
        }
    }
    let stats = table.stats();
    let config = table.config();
    Ok(FillReport {
        levels: config.levels,
        probe_budget: config.probe_budget,
        base_exponent: config.base_exponent,
        total_capacity: stats.total_capacity,
        items_at_crisis: stats.item_count,
        load_factor: stats.load_factor,
        level_stats: stats.levels,
        seed: config.seed,
        key_stream_seed,
        elapsed: start.elapsed(),
    })
}

/// Load-factor statistics over the trials of one sweep row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub total_capacity: usize,
    pub mean_items_at_crisis: f64,
    pub mean_load_factor: f64,
    pub min_load_factor: f64,
    pub max_load_factor: f64,
    /// Population standard deviation, so a single trial gives 0.
    pub stddev_load_factor: f64,
    /// Mean `n_i / N_i` per level.
    pub mean_level_occupancy: Vec<f64>,
}

impl SweepSummary {
    fn from_reports(reports: &[FillReport]) -> Self {
        let n = reports.len() as f64;
        let loads: Vec<f64> = reports.iter().map(|r| r.load_factor).collect();
        let mean = loads.iter().sum::<f64>() / n;
        let variance = loads.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / n;
        let levels = reports[0].level_stats.len();
        let mean_level_occupancy = (0..levels)
            .map(|i| reports.iter().map(|r| r.level_stats[i].occupancy).sum::<f64>() / n)
            .collect();
        SweepSummary {
            total_capacity: reports[0].total_capacity,
            mean_items_at_crisis: reports.iter().map(|r| r.items_at_crisis as f64).sum::<f64>() / n,
            mean_load_factor: mean,
            min_load_factor: loads.iter().copied().fold(f64::INFINITY, f64::min),
            max_load_factor: loads.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            stddev_load_factor: variance.sqrt(),
            mean_level_occupancy,
        }
    }
}

/// One level count's trials. Exactly one of `summary` and `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: usize,
    pub reports: Vec<FillReport>,
    pub summary: Option<SweepSummary>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub base_exponent: u32,
    pub probe_budget: usize,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn row(&self, m: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.m == m)
    }
}

/// Runs `trials` fills for every level count in `m_values`.
///
/// Trial `t` uses table seed [`trial_seed`]`(seed, t)` for every `m`, so rows
/// differ only in their level count. A level count that does not form a valid
/// configuration produces a row with `error` set; the other rows still run.
pub fn sweep(
    base_exponent: u32,
    budget: usize,
    m_values: &[usize],
    trials: usize,
    seed: u64,
) -> Result<SweepReport, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::Usage("at least one trial is required".into()));
    }
    let rows = m_values
        .iter()
        .map(|&m| {
            let reports: Result<Vec<_>, _> = (0..trials)
                .map(|t| {
                    let table_seed = trial_seed(seed, t);
                    let config = CascadeConfig::new(m, base_exponent)
                        .with_probe_budget(budget)
                        .with_seed(table_seed);
                    fill_until_crisis(&config, key_stream_seed(table_seed))
                })
                .collect();
            match reports {
                Ok(reports) => SweepRow {
                    m,
                    summary: Some(SweepSummary::from_reports(&reports)),
                    reports,
                    error: None,
                },
                Err(e) => SweepRow {
                    m,
                    reports: Vec::new(),
                    summary: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(SweepReport {
        base_exponent,
        probe_budget: budget,
        trials,
        seed,
        rows,
    })
}
