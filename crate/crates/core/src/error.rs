use thiserror::Error;

/// A violated configuration constraint.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("level count must be at least 1")]
    NoLevels,
    #[error("probe budget {budget} is not divisible by level count {levels}")]
    BudgetNotDivisible { budget: usize, levels: usize },
    #[error("base exponent {base_exponent} is too small for {levels} levels (need at least {})", levels - 1)]
    ExponentTooSmall { base_exponent: u32, levels: usize },
    #[error("expected {expected} level sizes, got {actual}")]
    SizeCountMismatch { expected: usize, actual: usize },
    #[error("level size {size} is not prime")]
    SizeNotPrime { size: usize },
    #[error("level {level} has {size} slots, fewer than its {probes} probes")]
    ProbesExceedSize { level: usize, size: usize, probes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CascadeError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("keys must be non-empty")]
    EmptyKey,
    #[error("level index {index} out of range 1..={levels}")]
    LevelOutOfRange { index: usize, levels: usize },
    #[error("table capacity overflow")]
    CapacityOverflow,
}
