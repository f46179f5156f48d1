use std::path::Path;
use std::process::{Command, Output};

use reservoir::report::{csv_body, RunManifest};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reservoir"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary starts")
}

/// Header and records of a CSV report, skipping the manifest line.
fn table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let body = csv_body(&std::fs::read_to_string(path).unwrap());
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

const INFEASIBLE: &str = r#"
name = "dry"
horizon = 1

[[reservoirs]]
max_volume = 10.0
initial_volume = 1.0
final_min_volume = 8.0

[[functions]]
kind = "profit"
breakpoints = [[0.0, 0.0]]
left_slope = 1.0
right_slope = 1.0

[[functions]]
kind = "risk"
breakpoints = [[0.0, 0.0]]
left_slope = 0.0
right_slope = 2.5

[[distributions]]
support = [[0.0, 1.0]]
"#;

#[test]
fn plan_writes_csv_and_json_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["plan", "--scenario", "builtin:simple2", "--out", "o"],
    );
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("objective"));
    assert!(text(&out.stderr).contains("elapsed"));

    let releases = std::fs::read_to_string(dir.path().join("o/releases.csv")).unwrap();
    let first = releases.lines().next().unwrap();
    let m: RunManifest = serde_json::from_str(first.strip_prefix("# manifest: ").unwrap()).unwrap();
    assert_eq!(m.command, "plan");
    assert_eq!(m.method.as_deref(), Some("proposed"));
    let (header, rows) = table(&dir.path().join("o/releases.csv"));
    assert_eq!(header, ["t", "n", "g", "x", "v"]);
    // 3 periods x 2 reservoirs
    assert_eq!(rows.len(), 6);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/plan.json")).unwrap())
            .unwrap();
    assert_eq!(json["result"]["status"], "optimal");
    assert_eq!(json["manifest"]["scenario"], "builtin:simple2");
}

#[test]
fn evaluate_reads_a_saved_plan() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(
        dir.path(),
        &[
            "plan",
            "--scenario",
            "builtin:simple1",
            "--out",
            "o",
            "--format",
            "json"
        ]
    )
    .status
    .success());
    assert!(!dir.path().join("o/releases.csv").exists());
    let out = run(
        dir.path(),
        &[
            "evaluate",
            "--scenario",
            "builtin:simple1",
            "--plan",
            "o/plan.json",
            "--reps",
            "20",
            "--out",
            "o",
        ],
    );
    assert!(out.status.success(), "{}", text(&out.stderr));
    let (header, rows) = table(&dir.path().join("o/evaluation.csv"));
    assert_eq!(header, ["rep", "release", "transfer", "risk", "total"]);
    let labels: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(labels.len(), 22);
    assert_eq!(&labels[20..], ["mean", "std"]);

    // a plan for another network is refused
    let out = run(
        dir.path(),
        &[
            "evaluate",
            "--scenario",
            "builtin:angpuang",
            "--plan",
            "o/plan.json",
            "--out",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("do not match"));
}

#[test]
fn compare_reports_both_methods_and_the_difference() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "compare",
            "--scenario",
            "builtin:simple2",
            "--reps",
            "30",
            "--out",
            "o",
            "--format",
            "json",
        ],
    );
    assert!(out.status.success(), "{}", text(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("o/comparison.json")).unwrap(),
    )
    .unwrap();
    let methods = json["result"]["methods"].as_array().unwrap();
    assert_eq!(methods[0]["method"], "proposed");
    assert_eq!(methods[1]["method"], "deterministic");
    let diff = json["result"]["paired_difference"]["mean"]
        .as_f64()
        .unwrap();
    let gap =
        methods[0]["mean_total"].as_f64().unwrap() - methods[1]["mean_total"].as_f64().unwrap();
    assert!((diff - gap).abs() < 1e-9);
    assert_eq!(json["manifest"]["sampling"], "paired");
}

#[test]
fn sweep_from_file_resolves_relative_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(
        dir.path(),
        &[
            "export",
            "--scenario",
            "builtin:simple1",
            "--out",
            "cfg/s1.toml"
        ]
    )
    .status
    .success());
    std::fs::write(
        dir.path().join("cfg/sweep.toml"),
        "base = \"s1.toml\"\nparameter = \"transfer-cost-slope\"\ngrid = [0.5, 2.0]\nreplications = 10\n",
    )
    .unwrap();
    let out = run(
        dir.path(),
        &["sweep", "--config", "cfg/sweep.toml", "--out", "o"],
    );
    assert!(out.status.success(), "{}", text(&out.stderr));
    let (header, rows) = table(&dir.path().join("o/sweep.csv"));
    assert_eq!(header[..3], ["parameter", "value", "method"]);
    assert_eq!(rows.len(), 4);

    let out = run(
        dir.path(),
        &[
            "sweep",
            "--scenario",
            "builtin:simple1",
            "--grid",
            "1",
            "--out",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("--parameter"));
    let out = run(
        dir.path(),
        &[
            "sweep",
            "--scenario",
            "builtin:simple1",
            "--parameter",
            "initial-volume-fraction",
            "--grid",
            "2",
            "--out",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["plan"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(
        run(dir.path(), &["validate", "--scenario", "builtin:nope"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(
            dir.path(),
            &["plan", "--scenario", "builtin:simple1", "--big-f", "-3"]
        )
        .status
        .code(),
        Some(1)
    );

    std::fs::write(dir.path().join("dry.toml"), INFEASIBLE).unwrap();
    assert!(run(dir.path(), &["validate", "--scenario", "dry.toml"])
        .status
        .success());
    let out = run(
        dir.path(),
        &["plan", "--scenario", "dry.toml", "--out", "o"],
    );
    assert_eq!(out.status.code(), Some(2), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("infeasible"));
    assert!(text(&out.stderr).contains("manifest: {"));
    assert!(!dir.path().join("o").exists());

    let unbounded = "NAME u\nOBJSENSE MAX\nROWS\n N obj\n L c\nCOLUMNS\n x obj 1 c -1\nRHS\n RHS c 1\nBOUNDS\nENDATA\n";
    std::fs::write(dir.path().join("u.mps"), unbounded).unwrap();
    let out = run(dir.path(), &["solve-lp", "u.mps"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(text(&out.stdout).contains("unbounded"));

    std::fs::write(dir.path().join("bad.mps"), "NAME u\nROWS\n Q c\nENDATA\n").unwrap();
    let out = run(dir.path(), &["solve-lp", "bad.mps"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("line 3"));
}

#[test]
fn dumped_lp_solves_to_the_plan_objective() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "plan",
            "--scenario",
            "builtin:simple2",
            "--out",
            "o",
            "--format",
            "json",
            "--dump-lp",
            "o/lp.mps",
        ],
    );
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/plan.json")).unwrap())
            .unwrap();
    let objective = json["result"]["objective"].as_f64().unwrap();
    let out = run(dir.path(), &["solve-lp", "o/lp.mps"]);
    assert!(out.status.success());
    let stdout = text(&out.stdout);
    let reported: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("objective: "))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(
        (reported - objective).abs() < 1e-9,
        "{reported} vs {objective}"
    );
}

#[test]
fn big_f_and_physical_sim_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "compare",
            "--scenario",
            "builtin:simple1",
            "--reps",
            "5",
            "--big-f",
            "500",
            "--physical-sim",
            "--out",
            "o",
        ],
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("o/comparison.csv")).unwrap();
    let m: RunManifest = serde_json::from_str(
        csv.lines()
            .next()
            .unwrap()
            .strip_prefix("# manifest: ")
            .unwrap(),
    )
    .unwrap();
    assert_eq!(m.big_f, Some(500.0));
    assert!(m.physical_sim);
    assert_eq!(m.replications, Some(5));
}
