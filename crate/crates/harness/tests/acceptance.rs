//! Acceptance criteria for the cascade table and its experiment harness.
//!
//! Each test prints one `criterion N: PASS|FAIL` line (run with
//! `--nocapture` to see them) and then asserts the same verdict. Tests hold a
//! shared lock so wall-clock limits are measured without contention.

use std::collections::HashMap;
use std::process::Command;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use cascadehash::{
    ladder_entry, ladder_sizes, mix64, u64_key, CascadeConfig, CascadeTable, GrowthPolicy,
    InsertOutcome,
};
use cascadehash_harness::{
    crisis_rate_estimate, equivalent_single_table_probes, sweep, SweepReport, DEFAULT_M_VALUES,
};
use cascadehash_oracle::{differential_run, exhaustive_crisis_check, random_ops};

const BUDGET: usize = 12;
const ROOT_SEED: u64 = 0;
const TRIALS: usize = 5;
const LOAD_TOLERANCE_PP: f64 = 3.0;

fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(number: u32, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number}: {status} - {detail}");
    assert!(pass, "criterion {number} failed: {detail}");
}

fn within_limit(elapsed: Duration, limit: Duration) -> (bool, String) {
    (
        elapsed < limit,
        format!("{:.2}s (limit {:.0}s)", elapsed.as_secs_f64(), limit.as_secs_f64()),
    )
}

fn mean_load_pct(report: &SweepReport, m: usize) -> f64 {
    report.row(m).unwrap().summary.as_ref().unwrap().mean_load_factor * 100.0
}

/// The k = 18 sweep shared by criteria 3 and 4, with its wall time.
fn table_one_sweep() -> &'static (SweepReport, Duration) {
    static SWEEP: OnceLock<(SweepReport, Duration)> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let report = sweep(18, BUDGET, &DEFAULT_M_VALUES, TRIALS, ROOT_SEED).unwrap();
        (report, start.elapsed())
    })
}

#[test]
fn criterion_01_ladder_exactness() {
    let _guard = serial();
    let start = Instant::now();
    let expected: [u64; 16] = [
        389, 769, 1543, 3079, 6151, 12289, 24593, 49157, 98317, 196613, 393241, 786433, 1572869,
        3145739, 6291469, 12582917,
    ];
    let entries: Vec<u64> = (7..=22).map(|k| ladder_entry(k).unwrap()).collect();
    let sum3: u64 = ladder_sizes(18, 3).unwrap().iter().sum();
    let sum6: u64 = ladder_sizes(18, 6).unwrap().iter().sum();
    let (fast, timing) = within_limit(start.elapsed(), Duration::from_secs(1));
    let pass = entries == expected && sum3 == 1_376_287 && sum6 == 1_548_354 && fast;
    verdict(
        1,
        pass,
        &format!("16 ladder sizes exact: {}; sum(18,3) = {sum3}; sum(18,6) = {sum6}; {timing}", entries == expected),
    );
}

#[test]
fn criterion_02_crisis_rate_arithmetic() {
    let _guard = serial();
    let start = Instant::now();
    let rate = crisis_rate_estimate(&[0.95, 0.72, 0.1], 4).unwrap();
    let probes = equivalent_single_table_probes(0.76, 0.000024).unwrap();
    let (fast, timing) = within_limit(start.elapsed(), Duration::from_secs(1));
    let rate_ok = (rate - 2.4e-5).abs() <= 1e-6;
    println!(
        "  crisis rate {rate:.6e} vs 2.4e-5 +/- 1e-6: {}",
        if rate_ok { "ok" } else { "out of tolerance" }
    );
    println!("  equivalent single-table probes {probes} vs 39: {}", if probes == 39 { "ok" } else { "wrong" });
    verdict(
        2,
        rate_ok && probes == 39 && fast,
        &format!("crisis rate = {rate:.6e}, equivalent probes = {probes}; {timing}"),
    );
}

#[test]
fn criterion_03_table_one_load_factors() {
    let _guard = serial();
    let (report, elapsed) = table_one_sweep();
    let targets = [(3, 77.44), (4, 82.05), (6, 87.59), (12, 78.69)];
    let mut pass = true;
    for (m, paper) in targets {
        let mean = mean_load_pct(report, m);
        let ok = (mean - paper).abs() <= LOAD_TOLERANCE_PP;
        pass &= ok;
        println!("  M = {m:2}: mean L {mean:.2}% vs {paper:.2}% +/- {LOAD_TOLERANCE_PP}: {}", if ok { "ok" } else { "out" });
    }
    let single = mean_load_pct(report, 1);
    let single_ok = (25.0..=42.0).contains(&single);
    pass &= single_ok;
    println!("  M =  1: mean L {single:.2}% vs band [25%, 42%]: {}", if single_ok { "ok" } else { "out" });
    let (fast, timing) = within_limit(*elapsed, Duration::from_secs(60));
    verdict(3, pass && fast, &format!("k = 18, {TRIALS} trials, root seed {ROOT_SEED}; {timing}"));
}

#[test]
fn criterion_04_six_levels_are_best() {
    let _guard = serial();
    let (report, _) = table_one_sweep();
    let six = mean_load_pct(report, 6);
    let best_other = DEFAULT_M_VALUES
        .iter()
        .filter(|&&m| m != 6)
        .map(|&m| (m, mean_load_pct(report, m)))
        .fold((0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    verdict(
        4,
        six > best_other.1,
        &format!("M = 6 mean L {six:.2}% vs best other M = {} at {:.2}%", best_other.0, best_other.1),
    );
}

#[test]
fn criterion_05_three_level_occupancy_profile() {
    let _guard = serial();
    let start = Instant::now();
    let report = sweep(18, BUDGET, &[3], 10, ROOT_SEED).unwrap();
    let elapsed = start.elapsed();
    let bands = [(0.92, 0.98), (0.66, 0.78), (0.05, 0.16)];
    let reports = &report.row(3).unwrap().reports;
    let mut in_band = 0;
    let mut decreasing = 0;
    for (trial, r) in reports.iter().enumerate() {
        let occ: Vec<f64> = r.level_stats.iter().map(|l| l.occupancy).collect();
        let ok = occ.iter().zip(bands).all(|(o, (lo, hi))| (lo..=hi).contains(o));
        let dec = occ.windows(2).all(|w| w[0] > w[1]);
        in_band += ok as usize;
        decreasing += dec as usize;
        println!(
            "  seed {trial}: {:.4} / {:.4} / {:.4}{}{}",
            occ[0],
            occ[1],
            occ[2],
            if ok { "" } else { "  outside band" },
            if dec { "" } else { "  not decreasing" }
        );
    }
    let summary = report.row(3).unwrap().summary.as_ref().unwrap();
    println!(
        "  mean: {}",
        summary.mean_level_occupancy.iter().map(|o| format!("{o:.4}")).collect::<Vec<_>>().join(" / ")
    );
    let (fast, timing) = within_limit(elapsed, Duration::from_secs(60));
    verdict(
        5,
        in_band == 10 && decreasing >= 9 && fast,
        &format!("{in_band}/10 seeds inside all bands, {decreasing}/10 strictly decreasing; {timing}"),
    );
}

#[test]
fn criterion_06_scale_stability() {
    let _guard = serial();
    let start = Instant::now();
    let report = sweep(20, BUDGET, &[3, 4, 6, 12], TRIALS, ROOT_SEED).unwrap();
    let elapsed = start.elapsed();
    let mut pass = true;
    for (m, paper) in [(3, 76.69), (4, 83.51), (6, 87.65), (12, 78.37)] {
        let mean = mean_load_pct(&report, m);
        let ok = (mean - paper).abs() <= LOAD_TOLERANCE_PP;
        pass &= ok;
        println!("  M = {m:2}: mean L {mean:.2}% vs {paper:.2}% +/- {LOAD_TOLERANCE_PP}: {}", if ok { "ok" } else { "out" });
    }
    let (fast, timing) = within_limit(elapsed, Duration::from_secs(300));
    verdict(6, pass && fast, &format!("k = 20, {TRIALS} trials; {timing}"));
}

#[test]
fn criterion_07_probe_bound() {
    let _guard = serial();
    let mut worst = 0;
    let mut operations = 0u64;
    for m in DEFAULT_M_VALUES {
        let config = CascadeConfig::new(m, 12).with_seed(m as u64);
        let mut table = CascadeTable::new(config).unwrap();
        let mut inserted = Vec::new();
        for i in 0.. {
            let key = u64_key(mix64(i));
            operations += 1;
            match table.insert(&key, b"v").unwrap() {
                InsertOutcome::Inserted { probes_used, .. } | InsertOutcome::Updated { probes_used, .. } => {
                    worst = worst.max(probes_used);
                    inserted.push(key);
                }
                InsertOutcome::Crisis => break,
            }
        }
        for key in inserted.iter().copied().chain((0..10_000u64).map(|i| u64_key(!mix64(i)))) {
            let (_, probes) = table.lookup_traced(&key);
            worst = worst.max(probes);
            operations += 1;
        }
        // growth path: every insert, including those that trigger a rehash
        let mut growing = CascadeTable::new(CascadeConfig::new(m, 11).with_growth(GrowthPolicy::GrowOnCrisis)).unwrap();
        for i in 0..30_000u64 {
            if let InsertOutcome::Inserted { probes_used, .. } = growing.insert(&u64_key(i), b"").unwrap() {
                worst = worst.max(probes_used);
            }
            operations += 1;
        }
    }
    verdict(7, worst <= BUDGET, &format!("max probes {worst} over {operations} operations (budget {BUDGET})"));
}

#[test]
fn criterion_08_oracle_equivalence() {
    let _guard = serial();
    let mut differential = true;
    for m in DEFAULT_M_VALUES {
        let mut table = CascadeTable::new(CascadeConfig::new(m, 14).with_seed(100 + m as u64)).unwrap();
        let ops = random_ops(200 + m as u64, 100_000, 14_000);
        differential &= differential_run(&mut table, &ops) == Ok(true);
        differential &= table.stats().load_factor <= 0.30;
    }
    let mut exhaustive = 0;
    let mut exhaustive_ok = true;
    for fill in 0..10_000u64 {
        let config = CascadeConfig::new(2, 0).with_probe_budget(4).with_seed(mix64(fill));
        let mut table = CascadeTable::with_level_sizes(config, &[7, 3]).unwrap();
        for i in 0..(fill % 14 + 1) {
            exhaustive_ok &= exhaustive_crisis_check(&mut table, &u64_key(mix64(fill << 8 | i)));
        }
        exhaustive += 1;
    }
    verdict(
        8,
        differential && exhaustive_ok,
        &format!("10^5-op differential runs for M in {DEFAULT_M_VALUES:?}: {differential}; {exhaustive} toy fills checked exhaustively: {exhaustive_ok}"),
    );
}

#[test]
fn criterion_09_determinism() {
    let _guard = serial();
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_cascadehash"))
            .args(args)
            .env_remove("CASCADEHASH_SEED")
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let args = ["sweep", "-k", "14", "--trials", "2", "--seed", "0", "--format", "csv"];
    let same_platform = run(&args) == run(&args);
    let golden = include_bytes!("../testdata/sweep_k11_seed7.csv");
    let cross_platform = run(&["sweep", "-k", "11", "--trials", "2", "--seed", "7", "--format", "csv"]) == golden;
    verdict(
        9,
        same_platform && cross_platform,
        &format!("repeat run byte-identical: {same_platform}; matches independently generated golden CSV: {cross_platform}"),
    );
}

#[test]
fn criterion_10_atomicity_and_grow_preservation() {
    let _guard = serial();
    let mut crises = 0;
    let mut atomic = true;
    for t in 0..1_000u64 {
        let config = CascadeConfig::new(2, 0).with_probe_budget(2).with_seed(t);
        let mut table = CascadeTable::with_level_sizes(config, &[3, 2]).unwrap();
        for i in 0..12u64 {
            let before = table.clone();
            if table.insert(&u64_key(mix64(t * 100 + i)), b"x").unwrap() == InsertOutcome::Crisis {
                crises += 1;
                atomic &= table == before;
            }
        }
    }
    let mut preserved = true;
    for t in 0..1_000u64 {
        let m = DEFAULT_M_VALUES[(t % 6) as usize];
        let mut table = CascadeTable::new(CascadeConfig::new(m, 11).with_seed(t)).unwrap();
        let items = 200 + (mix64(t) % 2_000);
        for i in 0..items {
            let k = mix64(t << 32 | i);
            table.insert(&u64_key(k), &k.to_be_bytes()[..(k % 9) as usize]).unwrap();
        }
        let before: HashMap<Vec<u8>, Vec<u8>> = table.entries().map(|(k, v)| (k.to_vec(), v.to_vec())).collect();
        let grown = table.grown().unwrap();
        let after: HashMap<Vec<u8>, Vec<u8>> = grown.entries().map(|(k, v)| (k.to_vec(), v.to_vec())).collect();
        preserved &= before == after && grown.len() == table.len();
    }
    verdict(
        10,
        atomic && preserved && crises > 0,
        &format!("{crises} crises left state unchanged: {atomic}; 1000 grows preserved pairs: {preserved}"),
    );
}
