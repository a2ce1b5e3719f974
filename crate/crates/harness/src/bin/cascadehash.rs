use std::process::ExitCode;

use cascadehash::{CascadeConfig, DEFAULT_PROBE_BUDGET};
use cascadehash_harness::{
    crisis_rate_estimate, emit_fill, emit_sweep, equivalent_single_table_probes, fill_until_crisis,
    key_stream_seed, sweep, Format, HarnessError, DEFAULT_M_VALUES,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cascadehash", version, about = "Cascade hash table experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fill one table with random keys until the first crisis.
    Fill {
        #[arg(long, short = 'm')]
        levels: usize,
        #[arg(long, default_value_t = DEFAULT_PROBE_BUDGET)]
        budget: usize,
        #[arg(long, short = 'k', default_value_t = 18)]
        base_exponent: u32,
        #[arg(long, env = "CASCADEHASH_SEED", default_value_t = 0)]
        seed: u64,
        /// Key stream seed; derived from --seed when omitted.
        #[arg(long)]
        key_seed: Option<u64>,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Repeat fills across level counts and seeds.
    Sweep {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_M_VALUES)]
        m_values: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_PROBE_BUDGET)]
        budget: usize,
        #[arg(long, short = 'k', default_value_t = 18)]
        base_exponent: u32,
        #[arg(long, env = "CASCADEHASH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Modeled crisis probability for the given per-level occupancies.
    CrisisRate {
        #[arg(long, value_delimiter = ',', required = true)]
        occupancies: Vec<f64>,
        #[arg(long)]
        probes: u32,
    },
    /// Probes a single table at the given load needs to reach a crisis rate.
    EquivProbes {
        #[arg(long)]
        load: f64,
        #[arg(long)]
        target: f64,
    },
}

fn run(cli: Cli) -> Result<String, HarnessError> {
    match cli.command {
        Command::Fill {
            levels,
            budget,
            base_exponent,
            seed,
            key_seed,
            format,
        } => {
            let config = CascadeConfig::new(levels, base_exponent)
                .with_probe_budget(budget)
                .with_seed(seed);
            let report = fill_until_crisis(&config, key_seed.unwrap_or_else(|| key_stream_seed(seed)))?;
            emit_fill(&report, format)
        }
        Command::Sweep {
            m_values,
            trials,
            budget,
            base_exponent,
            seed,
            format,
        } => {
            let report = sweep(base_exponent, budget, &m_values, trials, seed)?;
            if let Some(bad) = report.rows.iter().find(|r| r.error.is_some()) {
                if format != Format::Table {
                    eprintln!("error: M = {}: {}", bad.m, bad.error.as_deref().unwrap_or_default());
                }
                print!("{}", emit_sweep(&report, format)?);
                return Err(HarnessError::Usage("some rows had invalid configurations".into()));
            }
            emit_sweep(&report, format)
        }
        Command::CrisisRate { occupancies, probes } => {
            Ok(format!("{}\n", crisis_rate_estimate(&occupancies, probes)?))
        }
        Command::EquivProbes { load, target } => {
            Ok(format!("{}\n", equivalent_single_table_probes(load, target)?))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
