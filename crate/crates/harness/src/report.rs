//! Rendering of fill and sweep results.
//!
//! The table layout follows the classic `M | N | n* | L | n_i/N_i` experiment
//! tables. CSV has one row per (trial, M) under a fixed header and JSON is
//! the serde form of [`FillReport`] / [`SweepReport`]; both omit wall-clock
//! timings so repeated runs produce identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::experiment::{FillReport, SweepReport};
use crate::HarnessError;

pub const CSV_HEADER: &str = "m,trial,seed,total_capacity,items_at_crisis,load_factor,level_occupancies";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected table, csv or json)")),
        }
    }
}

/// One CSV line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub total_capacity: usize,
    pub items_at_crisis: usize,
    pub load_factor: f64,
    /// `n_1/N_1;n_2/N_2;...`
    pub level_occupancies: String,
}

impl CsvRow {
    fn from_report(report: &FillReport, trial: usize) -> Self {
        CsvRow {
            m: report.levels,
            trial,
            seed: report.seed,
            total_capacity: report.total_capacity,
            items_at_crisis: report.items_at_crisis,
            load_factor: report.load_factor,
            level_occupancies: report
                .level_stats
                .iter()
                .map(|l| format!("{}/{}", l.occupied, l.capacity))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }

    /// Parses `level_occupancies` back into `(n_i, N_i)` pairs.
    pub fn occupancies(&self) -> Result<Vec<(usize, usize)>, HarnessError> {
        self.level_occupancies
            .split(';')
            .map(|part| {
                let (n, cap) = part
                    .split_once('/')
                    .ok_or_else(|| HarnessError::Usage(format!("bad occupancy `{part}`")))?;
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|e| HarnessError::Usage(format!("bad occupancy `{part}`: {e}")))
                };
                Ok((parse(n)?, parse(cap)?))
            })
            .collect()
    }
}

fn write_csv<'a>(rows: impl Iterator<Item = (usize, &'a FillReport)>) -> Result<String, HarnessError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut wrote_any = false;
    for (trial, report) in rows {
        writer.serialize(CsvRow::from_report(report, trial))?;
        wrote_any = true;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    let mut text = String::from_utf8(bytes).expect("csv output is utf-8");
    if !wrote_any {
        text = format!("{CSV_HEADER}\n");
    }
    Ok(text)
}

/// Parses CSV produced by [`emit_fill`] or [`emit_sweep`].
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, HarnessError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(HarnessError::Usage(format!("unexpected csv header `{header}`")));
    }
    reader
        .deserialize()
        .collect::<Result<Vec<CsvRow>, _>>()
        .map_err(Into::into)
}

fn percent(load: f64) -> String {
    format!("{:.2}%", load * 100.0)
}

fn occupancy_list(report: &FillReport) -> String {
    report
        .level_stats
        .iter()
        .map(|l| format!("{}/{}", l.occupied, l.capacity))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn emit_fill(report: &FillReport, format: Format) -> Result<String, HarnessError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => write_csv(std::iter::once((0, report))),
        Format::Table => {
            let mut out = String::new();
            let rows = [
                ["M".to_string(), "N".into(), "n*".into(), "L".into(), "n_i/N_i".into()],
                [
                    report.levels.to_string(),
                    report.total_capacity.to_string(),
                    report.items_at_crisis.to_string(),
                    percent(report.load_factor),
                    occupancy_list(report),
                ],
            ];
            write_aligned(&mut out, &rows);
            writeln!(out).unwrap();
            writeln!(out, "L = {}", report.load_factor).unwrap();
            writeln!(out, "seed = {}, key stream seed = {}", report.seed, report.key_stream_seed).unwrap();
            writeln!(out, "elapsed = {:.3}s", report.elapsed.as_secs_f64()).unwrap();
            Ok(out)
        }
    }
}

pub fn emit_sweep(report: &SweepReport, format: Format) -> Result<String, HarnessError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => write_csv(
            report
                .rows
                .iter()
                .flat_map(|row| row.reports.iter().enumerate()),
        ),
        Format::Table => {
            let mut out = String::new();
            writeln!(
                out,
                "k = {}, B = {}, {} trial(s), seed = {}\n",
                report.base_exponent, report.probe_budget, report.trials, report.seed
            )
            .unwrap();
            let mut rows = vec![[
                "M".to_string(),
                "N".into(),
                "mean n*".into(),
                "mean L".into(),
                "min L".into(),
                "max L".into(),
                "sd L".into(),
                "mean n_i/N_i".into(),
            ]];
            let mut errors = Vec::new();
            for row in &report.rows {
                match (&row.summary, &row.error) {
                    (Some(s), _) => rows.push([
                        row.m.to_string(),
                        s.total_capacity.to_string(),
                        format!("{:.1}", s.mean_items_at_crisis),
                        percent(s.mean_load_factor),
                        percent(s.min_load_factor),
                        percent(s.max_load_factor),
                        percent(s.stddev_load_factor),
                        s.mean_level_occupancy
                            .iter()
                            .map(|o| format!("{o:.4}"))
                            .collect::<Vec<_>>()
                            .join(", "),
                    ]),
                    (None, Some(e)) => errors.push(format!("M = {}: {e}", row.m)),
                    (None, None) => {}
                }
            }
            write_aligned(&mut out, &rows);
            for e in errors {
                writeln!(out, "error: {e}").unwrap();
            }
            Ok(out)
        }
    }
}

fn write_aligned<const N: usize>(out: &mut String, rows: &[[String; N]]) {
    let widths: Vec<usize> = (0..N)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    for row in rows {
        let line = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect::<Vec<_>>()
            .join(" | ");
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
}
