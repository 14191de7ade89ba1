//! Subcommand implementations and exit-code policy: 0 success, 1 invalid
//! schedule (validate), 2 bad arguments or unparseable input, 3 exact-search
//! guard violations.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use twt_hnn::baselines::{run_baseline, DispatchRule};
use twt_hnn::generator::{generate, GeneratorConfig};
use twt_hnn::hnn::{solve, SolverConfig};
use twt_hnn::io::{self, ScheduleFile};
use twt_hnn::model::validate;
use twt_hnn::oracle::{default_horizon, solve_exact};
use twt_hnn::{Error, Instance, Schedule};

use crate::args::{BenchArgs, Cli, Command, GenArgs, OracleArgs, OutputFormat, SolveArgs, ValidateArgs};
use crate::bench::{report_to_csv, run_bench, BenchConfig, Method};
use crate::svg;

/// Failure with a process exit code.
#[derive(Debug)]
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl CmdError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CmdError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::ExactGuard(_) | Error::HorizonTooShort { .. } => 3,
            _ => 2,
        };
        Self { code, message: err.to_string() }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(err: std::io::Error) -> Self {
        Self { code: 2, message: err.to_string() }
    }
}

pub fn run(cli: Cli) -> Result<(), CmdError> {
    configure_threads(cli.threads);
    match &cli.command {
        Command::Gen(args) => cmd_gen(&cli, args),
        Command::Solve(args) => cmd_solve(&cli, args),
        Command::Bench(args) => cmd_bench(&cli, args),
        Command::Validate(args) => cmd_validate(args),
        Command::Oracle(args) => cmd_oracle(&cli, args),
    }
}

fn configure_threads(flag: Option<usize>) {
    let from_env = || {
        std::env::var("TWT_HNN_THREADS").ok().and_then(|v| v.parse::<usize>().ok())
    };
    if let Some(threads) = flag.or_else(from_env) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global()
            .ok();
    }
}

fn out_dir(cli: &Cli) -> Result<PathBuf, CmdError> {
    let dir = cli.out.clone().ok_or_else(|| CmdError::usage("--out <dir> is required"))?;
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> Result<(), CmdError> {
    if args.jobs == 0 {
        return Err(CmdError::usage("--jobs must be at least 1"));
    }
    if args.count == 0 {
        return Err(CmdError::usage("--count must be at least 1"));
    }
    let dir = out_dir(cli)?;
    let mut files = Vec::with_capacity(args.count);
    for index in 0..args.count {
        let config = GeneratorConfig {
            n_jobs: args.jobs,
            c1: args.c1,
            c2: args.c2,
            capacity_ratio: args.ratio,
            rng_seed: cli.seed.wrapping_add(index as u64),
        };
        let instance: Instance = generate(&config)?;
        let name = format!("instance_{index:04}.json");
        io::write_instance(&dir.join(&name), &instance)?;
        files.push(json!({ "file": name, "seed": config.rng_seed }));
    }
    let manifest = json!({
        "format_version": 1,
        "jobs": args.jobs,
        "count": args.count,
        "seed": cli.seed,
        "c1": args.c1,
        "c2": args.c2,
        "capacity_ratio": args.ratio,
        "files": files,
    });
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    println!("wrote {} instance(s) to {}", args.count, dir.display());
    Ok(())
}

impl From<serde_json::Error> for CmdError {
    fn from(err: serde_json::Error) -> Self {
        Self { code: 2, message: err.to_string() }
    }
}

fn load_solver_config(args: &SolveArgs, seed: u64) -> Result<SolverConfig<f64>, CmdError> {
    let mut config: SolverConfig<f64> = match &args.config {
        Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
        None => SolverConfig::default(),
    };
    config.restarts = args.restarts;
    config.seed = seed;
    Ok(config)
}

fn cmd_solve(cli: &Cli, args: &SolveArgs) -> Result<(), CmdError> {
    let instance: Instance = io::read_instance(&args.instance)?;
    let started = Instant::now();
    let (twt, schedule, config_echo) = match args.method {
        Method::Hnn => {
            let config = load_solver_config(args, cli.seed)?;
            let result = solve(&instance, &config)?;
            (result.twt, result.schedule, serde_json::to_value(&config)?)
        }
        Method::Oracle => {
            let horizon = args.horizon.unwrap_or_else(|| default_horizon(&instance));
            let result = solve_exact(&instance, horizon)?;
            (
                result.optimum_twt,
                result.schedule,
                json!({ "horizon": horizon, "nodes_explored": result.nodes_explored }),
            )
        }
        method => {
            let rule: DispatchRule = method
                .name()
                .parse()
                .map_err(|_| CmdError::usage(format!("method {method} is not a dispatch rule")))?;
            let repeats = if rule == DispatchRule::Random { args.repeats } else { 1 };
            let (schedule, twt) = run_baseline(&instance, rule, cli.seed, repeats)?;
            (twt, schedule, json!({ "seed": cli.seed, "repeats": repeats }))
        }
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    debug_assert!(validate(&instance, &schedule).map(|d| d.is_valid()).unwrap_or(false));

    println!("{twt}");
    let result = json!({
        "format_version": 1,
        "method": args.method.name(),
        "twt": twt,
        "schedule": ScheduleFile::from_schedule(&schedule),
        "wall_time_ms": wall_ms,
        "config": config_echo,
    });
    let text = serde_json::to_string_pretty(&result)?;
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_bench(cli: &Cli, args: &BenchArgs) -> Result<(), CmdError> {
    if args.sizes.is_empty() || args.count == 0 || args.methods.is_empty() {
        return Err(CmdError::usage("bench needs at least one size, instance and method"));
    }
    let dir = out_dir(cli)?;
    let config = BenchConfig {
        sizes: args.sizes.clone(),
        count: args.count,
        methods: args.methods.clone(),
        seed: cli.seed,
        hnn_restarts: args.restarts,
        random_repeats: args.random_repeats,
        c1: args.c1,
        c2: args.c2,
        capacity_ratio: args.ratio,
    };
    let report = run_bench(&config)?;
    if cli.format != Some(OutputFormat::Csv) {
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    }
    if cli.format != Some(OutputFormat::Json) {
        fs::write(dir.join("report.csv"), report_to_csv(&report))?;
    }
    if args.svg {
        fs::write(dir.join("report.svg"), svg::mean_twt_chart(&report))?;
    }
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    println!("benchmark report written to {}", dir.display());
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), CmdError> {
    let instance: Instance = io::read_instance(&args.instance)?;
    let schedule: Schedule = io::read_schedule(&args.schedule)?;
    let diagnostics = validate(&instance, &schedule)?;
    println!("error_count: {}", diagnostics.error_count);
    for (job, err) in diagnostics.row_errors.iter().enumerate() {
        if *err != 0 {
            println!("row {}: {} units vs size {}", job + 1, schedule.row_sum(job), instance.size(job));
        }
    }
    for (slot, overload) in diagnostics.column_overloads.iter().enumerate() {
        if *overload > 0 {
            println!(
                "column {}: load {} exceeds capacity {}",
                slot + 1,
                schedule.col_sum(slot),
                instance.capacity()
            );
        }
    }
    if diagnostics.is_valid() {
        Ok(())
    } else {
        Err(CmdError { code: 1, message: "schedule violates the instance constraints".into() })
    }
}

fn cmd_oracle(cli: &Cli, args: &OracleArgs) -> Result<(), CmdError> {
    let instance: Instance = io::read_instance(&args.instance)?;
    let horizon = args.horizon.unwrap_or_else(|| default_horizon(&instance));
    let result = solve_exact(&instance, horizon)?;
    println!("{}", result.optimum_twt);
    if let Some(path) = &cli.out {
        write_oracle_result(path, horizon, &result)?;
    }
    Ok(())
}

fn write_oracle_result(
    path: &Path,
    horizon: usize,
    result: &twt_hnn::oracle::OracleResult<f64>,
) -> Result<(), CmdError> {
    let text = serde_json::to_string_pretty(&json!({
        "format_version": 1,
        "optimum_twt": result.optimum_twt,
        "schedule": ScheduleFile::from_schedule(&result.schedule),
        "nodes_explored": result.nodes_explored,
        "horizon": horizon,
    }))?;
    fs::write(path, text)?;
    Ok(())
}
