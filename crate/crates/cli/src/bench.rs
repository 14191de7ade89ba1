//! Benchmark harness: generate seeded batches per job-count, run every
//! requested method on every instance, and aggregate means, win rates and
//! wall times into a JSON report and a CSV table.
//!
//! Seed derivation, fixed so reports are reproducible: the batch for job
//! count `s` uses `seed + (s << 32)`; instance `i` of a batch draws from
//! `batch_seed + i` (the generator contract); the HNN solve on an instance
//! reuses that instance's seed; the random baseline offsets it by
//! `0x52414E44` to decouple the two streams.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use twt_hnn::baselines::{run_baseline, DispatchRule};
use twt_hnn::generator::{generate, GeneratorConfig};
use twt_hnn::hnn::{solve, SolverConfig};
use twt_hnn::model::{total_weighted_tardiness, validate};
use twt_hnn::oracle::{default_horizon, solve_exact};
use twt_hnn::{Instance, Result};

const RANDOM_SEED_OFFSET: u64 = 0x5241_4E44;

/// A benchmarkable method: the heuristic solver, a dispatch rule, or the
/// exact search (which records a warning and drops out on oversize input).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hnn,
    Edd,
    Wspt,
    Lwpf,
    Lbs,
    Random,
    Oracle,
}

impl Method {
    /// Canonical report order.
    pub const ALL: [Method; 7] = [
        Method::Hnn,
        Method::Edd,
        Method::Wspt,
        Method::Lwpf,
        Method::Lbs,
        Method::Random,
        Method::Oracle,
    ];

    /// The default benchmark set: the solver plus the five baselines.
    pub const DEFAULT: [Method; 6] = [
        Method::Hnn,
        Method::Edd,
        Method::Wspt,
        Method::Lwpf,
        Method::Lbs,
        Method::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Hnn => "hnn",
            Method::Edd => "edd",
            Method::Wspt => "wspt",
            Method::Lwpf => "lwpf",
            Method::Lbs => "lbs",
            Method::Random => "random",
            Method::Oracle => "oracle",
        }
    }

    /// Human label for reports.
    pub fn label(self) -> &'static str {
        match self {
            Method::Hnn => "HNN",
            Method::Edd => "EDD",
            Method::Wspt => "WSPT",
            Method::Lwpf => "LWPF",
            Method::Lbs => "LBS (sketch)",
            Method::Random => "Random (best of repeats)",
            Method::Oracle => "Exact search",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hnn" => Ok(Method::Hnn),
            "edd" => Ok(Method::Edd),
            "wspt" => Ok(Method::Wspt),
            "lwpf" => Ok(Method::Lwpf),
            "lbs" => Ok(Method::Lbs),
            "random" => Ok(Method::Random),
            "oracle" => Ok(Method::Oracle),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub count: usize,
    pub methods: Vec<Method>,
    pub seed: u64,
    /// Restart budget for the HNN method.
    pub hnn_restarts: usize,
    /// Repeat budget for the random baseline.
    pub random_repeats: usize,
    pub c1: u64,
    pub c2: u64,
    pub capacity_ratio: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![5, 10, 20, 25, 50, 75, 100],
            count: 100,
            methods: Method::DEFAULT.to_vec(),
            seed: 0,
            hnn_restarts: 1000,
            random_repeats: 1000,
            c1: 10,
            c2: 5,
            capacity_ratio: 0.25,
        }
    }
}

impl BenchConfig {
    pub fn batch_seed(&self, size: usize) -> u64 {
        self.seed.wrapping_add((size as u64) << 32)
    }

    fn generator_for(&self, size: usize, index: usize) -> GeneratorConfig {
        GeneratorConfig {
            n_jobs: size,
            c1: self.c1,
            c2: self.c2,
            capacity_ratio: self.capacity_ratio,
            rng_seed: self.batch_seed(size).wrapping_add(index as u64),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MethodStats {
    pub mean_twt: f64,
    pub median_twt: f64,
    pub mean_wall_ms: f64,
    pub instances: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SizeReport {
    pub n_jobs: usize,
    pub per_method: BTreeMap<String, MethodStats>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub format_version: u32,
    pub per_size: Vec<SizeReport>,
    /// Strict-improvement fraction of the HNN over each other method,
    /// keyed `hnn_vs_<method>@<size>`.
    pub win_rate_vs: BTreeMap<String, f64>,
    pub instance_count: usize,
    pub config_echo: BenchConfig,
    pub method_labels: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

/// One (instance, method) outcome; `twt` is absent when the method refused
/// the instance (guard rails), in which case `warning` explains it.
#[derive(Debug, Clone)]
struct RunRecord {
    size: usize,
    instance_idx: usize,
    method: Method,
    twt: Option<f64>,
    wall_ms: f64,
    warning: Option<String>,
}

fn run_method(config: &BenchConfig, instance: &Instance, seed: u64, method: Method) -> Result<(f64, f64)> {
    let started = Instant::now();
    let twt = match method {
        Method::Hnn => {
            let solver = SolverConfig { restarts: config.hnn_restarts, seed, ..SolverConfig::default() };
            let result = solve(instance, &solver)?;
            debug_assert!(validate(instance, &result.schedule)?.is_valid());
            debug_assert_eq!(total_weighted_tardiness(instance, &result.schedule)?, result.twt);
            result.twt
        }
        Method::Oracle => solve_exact(instance, default_horizon(instance))?.optimum_twt,
        Method::Random => {
            run_baseline(
                instance,
                DispatchRule::Random,
                seed.wrapping_add(RANDOM_SEED_OFFSET),
                config.random_repeats,
            )?
            .1
        }
        Method::Edd => run_baseline(instance, DispatchRule::Edd, seed, 1)?.1,
        Method::Wspt => run_baseline(instance, DispatchRule::Wspt, seed, 1)?.1,
        Method::Lwpf => run_baseline(instance, DispatchRule::Lwpf, seed, 1)?.1,
        Method::Lbs => run_baseline(instance, DispatchRule::Lbs, seed, 1)?.1,
    };
    Ok((twt, started.elapsed().as_secs_f64() * 1e3))
}

/// Runs the full benchmark. Per-instance failures become warnings and the
/// affected (instance, method) cell drops out of the aggregates.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    let mut tasks: Vec<(usize, usize, Method)> = Vec::new();
    for &size in &config.sizes {
        for idx in 0..config.count {
            for &method in &config.methods {
                tasks.push((size, idx, method));
            }
        }
    }

    let mut records: Vec<RunRecord> = tasks
        .par_iter()
        .map(|&(size, idx, method)| {
            let gen_cfg = config.generator_for(size, idx);
            match generate::<f64>(&gen_cfg).and_then(|inst| run_method(config, &inst, gen_cfg.rng_seed, method)) {
                Ok((twt, wall_ms)) => RunRecord {
                    size,
                    instance_idx: idx,
                    method,
                    twt: Some(twt),
                    wall_ms,
                    warning: None,
                },
                Err(err) => RunRecord {
                    size,
                    instance_idx: idx,
                    method,
                    twt: None,
                    wall_ms: 0.0,
                    warning: Some(format!(
                        "size {size} instance {idx} method {}: {err}",
                        method.name()
                    )),
                },
            }
        })
        .collect();

    // Deterministic assembly order regardless of thread scheduling.
    let method_rank =
        |m: Method| Method::ALL.iter().position(|&x| x == m).expect("known method");
    records.sort_by_key(|r| (r.size, r.instance_idx, method_rank(r.method)));

    let mut per_size = Vec::new();
    let mut win_rate_vs = BTreeMap::new();
    let mut warnings: Vec<String> =
        records.iter().filter_map(|r| r.warning.clone()).collect();
    warnings.sort();

    for &size in &config.sizes {
        let mut per_method = BTreeMap::new();
        for &method in &config.methods {
            let twts: Vec<f64> = records
                .iter()
                .filter(|r| r.size == size && r.method == method)
                .filter_map(|r| r.twt)
                .collect();
            let walls: Vec<f64> = records
                .iter()
                .filter(|r| r.size == size && r.method == method && r.twt.is_some())
                .map(|r| r.wall_ms)
                .collect();
            per_method.insert(
                method.name().to_string(),
                MethodStats {
                    mean_twt: mean(&twts),
                    median_twt: median(&twts),
                    mean_wall_ms: mean(&walls),
                    instances: twts.len(),
                },
            );
        }
        if config.methods.contains(&Method::Hnn) {
            for &method in &config.methods {
                if method == Method::Hnn {
                    continue;
                }
                let mut wins = 0usize;
                let mut comparable = 0usize;
                for idx in 0..config.count {
                    let value = |m: Method| {
                        records
                            .iter()
                            .find(|r| r.size == size && r.instance_idx == idx && r.method == m)
                            .and_then(|r| r.twt)
                    };
                    if let (Some(h), Some(other)) = (value(Method::Hnn), value(method)) {
                        comparable += 1;
                        if h < other {
                            wins += 1;
                        }
                    }
                }
                if comparable > 0 {
                    win_rate_vs.insert(
                        format!("hnn_vs_{}@{size}", method.name()),
                        wins as f64 / comparable as f64,
                    );
                }
            }
        }
        per_size.push(SizeReport { n_jobs: size, per_method });
    }

    let method_labels = config
        .methods
        .iter()
        .map(|m| (m.name().to_string(), m.label().to_string()))
        .collect();

    Ok(BenchReport {
        format_version: 1,
        per_size,
        win_rate_vs,
        instance_count: config.sizes.len() * config.count,
        config_echo: config.clone(),
        method_labels,
        warnings,
    })
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        f64::NAN
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite tardiness"));
    let mid = sorted.len() / 2;
    if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    }
}

/// CSV table: `size,method,mean_twt,ratio_to_hnn,win_rate_hnn,mean_ms`.
/// `ratio_to_hnn` is mean(method) / mean(hnn); the wall-time column is the
/// only run-to-run varying one.
pub fn report_to_csv(report: &BenchReport) -> String {
    let mut out = String::from("size,method,mean_twt,ratio_to_hnn,win_rate_hnn,mean_ms\n");
    for size_report in &report.per_size {
        let hnn_mean = size_report.per_method.get("hnn").map(|s| s.mean_twt);
        for method in Method::ALL {
            let Some(stats) = size_report.per_method.get(method.name()) else {
                continue;
            };
            let ratio = match hnn_mean {
                Some(h) if h > 0.0 => format!("{:.6}", stats.mean_twt / h),
                Some(_) if method == Method::Hnn => "1.000000".to_string(),
                _ => String::new(),
            };
            let win = if method == Method::Hnn {
                String::new()
            } else {
                report
                    .win_rate_vs
                    .get(&format!("hnn_vs_{}@{}", method.name(), size_report.n_jobs))
                    .map(|w| format!("{w:.6}"))
                    .unwrap_or_default()
            };
            out.push_str(&format!(
                "{},{},{:.6},{},{},{:.3}\n",
                size_report.n_jobs,
                method.name(),
                stats.mean_twt,
                ratio,
                win,
                stats.mean_wall_ms,
            ));
        }
    }
    out
}
