//! End-to-end checks of the compiled binary: file outputs, stdout contract
//! and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twt-hnn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn write_tight_instance(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("tight.json");
    fs::write(
        &path,
        r#"{"format_version":1,"sizes":[2,3,2],"deadlines":[3,3,3],"weights":[3,2,1],"capacity":2}"#,
    )
    .unwrap();
    path
}

#[test]
fn gen_writes_instances_and_manifest_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let output = run(&[
            "gen", "--jobs", "6", "--count", "4", "--seed", "42", "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success());
    }
    for name in ["instance_0000.json", "instance_0003.json", "manifest.json"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identically seeded runs");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["count"], 4);
    assert_eq!(manifest["files"].as_array().unwrap().len(), 4);
    assert_eq!(manifest["files"][2]["seed"], 44);
}

#[test]
fn gen_without_jobs_is_a_usage_error() {
    let output = run(&["gen", "--count", "1", "--out", "/tmp/unused"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn solve_edd_is_deterministic_and_prints_twt_first() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tight_instance(dir.path());
    let a = run(&["solve", "--method", "edd", instance.to_str().unwrap()]);
    let b = run(&["solve", "--method", "edd", instance.to_str().unwrap()]);
    assert!(a.status.success());
    let parse = |out: &Output| {
        let text = stdout(out);
        let (twt_line, json) = text.split_once('\n').unwrap();
        let mut value: serde_json::Value = serde_json::from_str(json).unwrap();
        value.as_object_mut().unwrap().remove("wall_time_ms");
        (twt_line.to_string(), value)
    };
    assert_eq!(parse(&a), parse(&b), "identical runs differ beyond wall time");
    let first_line = stdout(&a).lines().next().unwrap().to_string();
    let twt: f64 = first_line.parse().expect("first line is the TWT");
    assert!(twt >= 1.0, "exact optimum of this instance is 1");
}

#[test]
fn solve_writes_valid_schedule_json() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tight_instance(dir.path());
    let result_path = dir.path().join("result.json");
    let output = run(&[
        "solve", "--method", "hnn", "--restarts", "50", "--seed", "3",
        "--out", result_path.to_str().unwrap(), instance.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&result_path).unwrap()).unwrap();
    assert_eq!(result["method"], "hnn");
    assert_eq!(result["schedule"]["format_version"], 1);
    let rows = result["schedule"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    // Row sums must match the job sizes.
    let sums: Vec<u64> = rows
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum())
        .collect();
    assert_eq!(sums, vec![2, 3, 2]);

    // The schedule file round-trips through the validator.
    let schedule_path = dir.path().join("schedule.json");
    fs::write(&schedule_path, serde_json::to_string(&result["schedule"]).unwrap()).unwrap();
    let check = run(&[
        "validate", instance.to_str().unwrap(), schedule_path.to_str().unwrap(),
    ]);
    assert_eq!(check.status.code(), Some(0));
    assert!(stdout(&check).contains("error_count: 0"));
}

#[test]
fn solve_oracle_matches_oracle_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tight_instance(dir.path());
    let via_solve = run(&["solve", "--method", "oracle", instance.to_str().unwrap()]);
    let via_oracle = run(&["oracle", instance.to_str().unwrap()]);
    assert!(via_solve.status.success());
    assert!(via_oracle.status.success());
    let twt_a = stdout(&via_solve).lines().next().unwrap().to_string();
    let twt_b = stdout(&via_oracle).lines().next().unwrap().to_string();
    assert_eq!(twt_a, "1");
    assert_eq!(twt_b, "1");
}

#[test]
fn unparseable_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{definitely not json").unwrap();
    let output = run(&["solve", "--method", "edd", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let missing = run(&["solve", "--method", "edd", "/nonexistent/nope.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn oracle_guard_violation_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    fs::write(
        &path,
        r#"{"format_version":1,"sizes":[1,1,1,1,1,1,1],"deadlines":[7,7,7,7,7,7,7],"weights":[1,1,1,1,1,1,1],"capacity":2}"#,
    )
    .unwrap();
    let output = run(&["oracle", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(3));
    let via_solve = run(&["solve", "--method", "oracle", path.to_str().unwrap()]);
    assert_eq!(via_solve.status.code(), Some(3));
}

#[test]
fn validate_reports_overload_location_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("instance.json");
    fs::write(
        &instance,
        r#"{"format_version":1,"sizes":[1,1],"deadlines":[1,1],"weights":[1,1],"capacity":1}"#,
    )
    .unwrap();
    let schedule = dir.path().join("schedule.json");
    fs::write(&schedule, r#"{"format_version":1,"length":1,"rows":[[1],[1]]}"#).unwrap();
    let output = run(&["validate", instance.to_str().unwrap(), schedule.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("error_count: 1"));
    assert!(text.contains("column 1"));

    let garbled = dir.path().join("garbled.json");
    fs::write(&garbled, "[[[").unwrap();
    let parse_fail = run(&["validate", instance.to_str().unwrap(), garbled.to_str().unwrap()]);
    assert_eq!(parse_fail.status.code(), Some(2));
}

#[test]
fn bench_writes_csv_and_json_with_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report");
    let output = run(&[
        "bench", "--sizes", "4,6", "--count", "3", "--restarts", "8",
        "--random-repeats", "8", "--seed", "5", "--svg", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "size,method,mean_twt,ratio_to_hnn,win_rate_hnn,mean_ms"
    );
    assert_eq!(csv.lines().count(), 1 + 2 * 6, "two sizes, six methods each");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["instance_count"], 6);
    assert_eq!(report["config_echo"]["seed"], 5);
    assert_eq!(report["method_labels"]["lbs"], "LBS (sketch)");
    assert!(fs::read_to_string(out.join("report.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn solve_accepts_solver_config_json() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tight_instance(dir.path());
    let config_path = dir.path().join("solver.json");
    fs::write(
        &config_path,
        r#"{"alpha0":0.1,"alpha_step":0.01,"beta":5.0,"gamma":5.0,"error_tolerance":5,
            "restarts":9,"max_sweeps":50,"max_alpha_iters":60,"seed":0}"#,
    )
    .unwrap();
    let out = dir.path().join("result.json");
    let output = run(&[
        "solve", "--method", "hnn", "--config", config_path.to_str().unwrap(),
        "--restarts", "40", "--seed", "6", "--out", out.to_str().unwrap(),
        instance.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    // Flags override the restart budget and seed; the file supplies the rest.
    assert_eq!(result["config"]["restarts"], 40);
    assert_eq!(result["config"]["seed"], 6);
    assert_eq!(result["config"]["max_alpha_iters"], 60);
}

#[test]
fn bench_format_flag_restricts_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("csv_only");
    let output = run(&[
        "bench", "--sizes", "4", "--count", "2", "--restarts", "4",
        "--random-repeats", "4", "--format", "csv", "--out", out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(out.join("report.csv").exists());
    assert!(!out.join("report.json").exists());
}

#[test]
fn threads_flag_and_env_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_tight_instance(dir.path());
    let flagged = run(&[
        "solve", "--method", "hnn", "--restarts", "10", "--threads", "1",
        instance.to_str().unwrap(),
    ]);
    assert!(flagged.status.success());
    let via_env = bin()
        .env("TWT_HNN_THREADS", "1")
        .args(["solve", "--method", "hnn", "--restarts", "10", instance.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(via_env.status.success());
    // Thread count must not change the result.
    assert_eq!(
        stdout(&flagged).lines().next(),
        stdout(&via_env).lines().next()
    );
}
