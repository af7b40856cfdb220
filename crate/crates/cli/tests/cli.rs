use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rankability"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let value: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

/// Runs a command expected to succeed and validates its JSON output.
fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    let schema = schema();
    if let Err(errors) = schema.validate(&value) {
        let messages: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("{:?} output violates the schema: {:?}", args, messages);
    }
    value
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn csv_matrix(rows: &[Vec<u64>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(",") + "\n")
        .collect()
}

const EXAMPLE_ONE: &str = "# four objects\n0,1,1,0\n0,0,1,1\n0,0,0,0\n1,0,1,0\n";

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn spectrum_of_example_one() {
    let dir = tmp();
    let path = write(dir.path(), "ex1.csv", EXAMPLE_ONE);
    let v = json(&["spectrum", &path]);
    assert_eq!(v["spectrum"], "0,3,6,6,6,3,0");
    assert_eq!(v["s_hat"], 1);
    assert_eq!(v["a_s_hat"], "3");
    assert_eq!(v["input"]["t"], 6);
    assert_eq!(v["summary"]["sigma_sign"], "zero");
    assert_eq!(v["schema_version"], 1);
    assert!(v.get("rankings").is_none());
}

#[test]
fn spectrum_of_single_comparison() {
    let dir = tmp();
    let path = write(dir.path(), "two.csv", "0,1\n0,0\n");
    assert_eq!(json(&["spectrum", &path])["spectrum"], "1,1");
}

#[test]
fn spectrum_csv_table() {
    let dir = tmp();
    let path = write(dir.path(), "ex1.csv", EXAMPLE_ONE);
    let out = run(&["spectrum", "--csv", &path]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "t,a_t\n0,0\n1,3\n2,6\n3,6\n4,6\n5,3\n6,0\n"
    );
}

#[test]
fn non_square_input_is_an_input_error() {
    let dir = tmp();
    let path = write(dir.path(), "bad.csv", "0,1,2\n1,0,2\n");
    let out = run(&["spectrum", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("square"));
}

#[test]
fn bad_entry_is_located() {
    let dir = tmp();
    let path = write(dir.path(), "bad.csv", "A,B,C\n0,1,2\n1,x,2\n0,0,0\n");
    let out = run(&["rankings", &path]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3, column 2"), "{}", stderr);
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["spectrum", "/nonexistent/matrix.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rankings_of_example_one_end_with_object_three() {
    let dir = tmp();
    let path = write(dir.path(), "ex1.csv", &format!("A,B,C,D\n{}", EXAMPLE_ONE));
    let v = json(&["rankings", &path]);
    assert_eq!(v["rankings"]["count"], "3");
    assert_eq!(v["rankings"]["complete"], true);
    let listed = v["rankings"]["listed"].as_array().unwrap();
    assert_eq!(listed.len(), 3);
    for r in listed {
        assert_eq!(r[3], "C");
    }
    assert_eq!(listed[0], serde_json::json!(["A", "B", "D", "C"]));
}

#[test]
fn rankings_of_transitive_and_zero_matrices() {
    let dir = tmp();
    let t = write(dir.path(), "t.csv", "0,2,2\n0,0,2\n0,0,0\n");
    let v = json(&["rankings", &t]);
    assert_eq!(
        v["rankings"]["listed"],
        serde_json::json!([["1", "2", "3"]])
    );
    let z = write(dir.path(), "z.csv", "0,0,0\n0,0,0\n0,0,0\n");
    let v = json(&["rankings", &z]);
    assert_eq!(v["rankings"]["count"], "6");
    assert_eq!(v["rankings"]["listed"].as_array().unwrap().len(), 6);
}

#[test]
fn max_list_truncates_but_keeps_count() {
    let dir = tmp();
    let z = write(dir.path(), "z.csv", &csv_matrix(&vec![vec![0; 5]; 5]));
    let v = json(&["rankings", "--max-list", "4", &z]);
    assert_eq!(v["rankings"]["count"], "120");
    assert_eq!(v["rankings"]["complete"], false);
    assert_eq!(v["rankings"]["listed"].as_array().unwrap().len(), 4);
}

#[test]
fn too_many_rankings_hit_the_listing_limit() {
    let dir = tmp();
    let z = write(dir.path(), "z.csv", &csv_matrix(&vec![vec![0; 11]; 11]));
    let out = run(&["rankings", &z]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
}

#[test]
fn spectrum_size_limit() {
    let dir = tmp();
    let path = write(dir.path(), "big.csv", &csv_matrix(&vec![vec![0; 23]; 23]));
    let out = run(&["spectrum", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
}

#[test]
fn oracle_matches_fast_algorithms_byte_for_byte() {
    let dir = tmp();
    let inputs = [
        write(dir.path(), "ex1.csv", &format!("A,B,C,D\n{}", EXAMPLE_ONE)),
        write(
            dir.path(),
            "m6.csv",
            "0,1,3,0,2,1\n2,0,0,1,1,3\n0,3,0,2,0,1\n1,2,0,0,3,0\n2,0,1,0,0,2\n0,1,1,3,1,0\n",
        ),
        write(dir.path(), "one.csv", "0\n"),
    ];
    for path in &inputs {
        let fast = run(&["spectrum", "--rankings", path]);
        let oracle = run(&["oracle", path]);
        assert!(fast.status.success() && oracle.status.success());
        assert_eq!(fast.stdout, oracle.stdout, "{}", path);
    }
    assert_eq!(json(&["oracle", &inputs[2]])["spectrum"], "1");
}

#[test]
fn oracle_refuses_large_inputs() {
    let dir = tmp();
    let path = write(dir.path(), "m11.csv", &csv_matrix(&vec![vec![0; 11]; 11]));
    assert_eq!(run(&["oracle", &path]).status.code(), Some(3));
}

#[test]
fn grid_file_is_a_normalized_density() {
    let dir = tmp();
    let path = write(dir.path(), "ex1.csv", EXAMPLE_ONE);
    let grid = dir.path().join("grid.csv");
    let v = json(&[
        "spectrum",
        &path,
        "--grid",
        grid.to_str().unwrap(),
        "--grid-points",
        "501",
    ]);
    assert_eq!(v["grid"], grid.to_str().unwrap());
    let text = fs::read_to_string(&grid).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,density"));
    let points: Vec<(f64, f64)> = lines
        .map(|l| {
            let (p, d) = l.split_once(',').unwrap();
            (p.parse().unwrap(), d.parse().unwrap())
        })
        .collect();
    assert_eq!(points.len(), 501);
    assert_eq!((points[0].0, points[500].0), (0.5, 1.0));
    let mass: f64 = points
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum();
    assert!((mass - 1.0).abs() < 1e-5, "{}", mass);
}

#[test]
fn joint_of_one_matrix_equals_single_analysis() {
    let dir = tmp();
    let path = write(dir.path(), "m.csv", "0,3,1,0\n1,0,2,2\n1,0,0,3\n2,1,0,0\n");
    let single = json(&["spectrum", &path]);
    let joint = json(&["joint", &path, "--grid-points", "20001"]);
    let j = &joint["joint"];
    let s = &single["summary"];
    assert!((j["mode"].as_f64().unwrap() - s["mode"].as_f64().unwrap()).abs() < 1e-6);
    assert!((j["mean"].as_f64().unwrap() - s["mean"].as_f64().unwrap()).abs() < 1e-6);
    assert_eq!(j["lambda_joint"], single["lambda"]);
    assert_eq!(joint["matrices"][0]["s_hat"], single["s_hat"]);
}

#[test]
fn joint_linearity_of_table_one_seasons() {
    // a two-object matrix [[0, T - S], [S, 0]] has Slater index S
    let seasons = [
        (20, 68),
        (19, 70),
        (19, 72),
        (14, 56),
        (16, 53),
        (17, 56),
        (15, 55),
        (17, 56),
        (17, 55),
        (18, 56),
    ];
    let dir = tmp();
    let paths: Vec<String> = seasons
        .iter()
        .enumerate()
        .map(|(i, &(s, t))| {
            write(
                dir.path(),
                &format!("s{}.csv", i),
                &format!("0,{}\n{},0\n", t - s, s),
            )
        })
        .collect();
    let mut args = vec!["joint"];
    args.extend(paths.iter().map(String::as_str));
    let v = json(&args);
    for (row, &(s, t)) in v["matrices"].as_array().unwrap().iter().zip(&seasons) {
        assert_eq!(
            (row["s_hat"].as_u64(), row["t"].as_u64()),
            (Some(s), Some(t))
        );
    }
    let lambda = v["joint"]["lambda_joint"].as_f64().unwrap();
    assert_eq!(format!("{:.2}", lambda), "0.71");
}

#[test]
fn joint_without_inputs_is_a_usage_error() {
    assert_eq!(run(&["joint"]).status.code(), Some(2));
}

fn simulate(dir: &Path, args: &[&str]) -> Vec<PathBuf> {
    let mut full = vec!["simulate", "--out-dir", dir.to_str().unwrap()];
    full.extend_from_slice(args);
    let v = json(&full);
    v["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| PathBuf::from(f.as_str().unwrap()))
        .collect()
}

#[test]
fn simulate_with_certain_outcomes() {
    let dir = tmp();
    let files = simulate(dir.path(), &["--p", "1.0", "--M", "4", "--K", "2"]);
    assert_eq!(files.len(), 1);
    assert_eq!(
        fs::read_to_string(&files[0]).unwrap(),
        "0,2,2,2\n0,0,2,2\n0,0,0,2\n0,0,0,0\n"
    );
}

#[test]
fn simulate_is_deterministic() {
    let (a, b) = (tmp(), tmp());
    let args = [
        "--p", "0.7", "--m", "6", "--k", "3", "--l", "3", "--seed", "11",
    ];
    let fa = simulate(a.path(), &args);
    let fb = simulate(b.path(), &args);
    assert_eq!(fa.len(), 3);
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }
    assert_ne!(fs::read(&fa[0]).unwrap(), fs::read(&fa[1]).unwrap());
}

#[test]
fn simulate_rejects_invalid_probability() {
    let dir = tmp();
    let out = run(&[
        "simulate",
        "--M",
        "4",
        "--K",
        "1",
        "--p",
        "0.3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn weak_signal_joint_mode() {
    let dir = tmp();
    let files = simulate(
        dir.path(),
        &[
            "--p", "0.6", "--M", "10", "--K", "2", "--L", "30", "--seed", "5",
        ],
    );
    let mut args = vec!["joint".to_string()];
    args.extend(files.iter().map(|f| f.display().to_string()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let mode = json(&args)["joint"]["mode"].as_f64().unwrap();
    assert!((0.5..=0.75).contains(&mode), "{}", mode);
}

#[test]
fn slater_test_rejects_perfect_order() {
    let dir = tmp();
    let files = simulate(dir.path(), &["--p", "1", "--M", "8", "--K", "2"]);
    let v = json(&[
        "slater-test",
        files[0].to_str().unwrap(),
        "--n-mc",
        "1000",
        "--epsilon",
        "0.01",
        "--seed",
        "3",
    ]);
    assert_eq!(v["s_hat_observed"], 0);
    assert!(v["p_val"].as_f64().unwrap() <= 0.01);
    assert_eq!(v["decision"], "reject-H0");
}

#[test]
fn slater_test_with_one_replica() {
    let dir = tmp();
    let files = simulate(
        dir.path(),
        &["--p", "0.5", "--M", "5", "--K", "1", "--seed", "2"],
    );
    let p = json(&["slater-test", files[0].to_str().unwrap(), "--n-mc", "1"])["p_val"]
        .as_f64()
        .unwrap();
    assert!(p == 0.0 || p == 1.0);
}

#[test]
fn slater_test_is_calibrated_under_h0() {
    let dir = tmp();
    let files = simulate(
        dir.path(),
        &[
            "--p", "0.5", "--M", "8", "--K", "2", "--L", "50", "--seed", "77",
        ],
    );
    let small = files
        .iter()
        .enumerate()
        .filter(|(i, f)| {
            let seed = i.to_string();
            let v = json(&[
                "slater-test",
                f.to_str().unwrap(),
                "--n-mc",
                "300",
                "--seed",
                &seed,
            ]);
            v["p_val"].as_f64().unwrap() <= 0.05
        })
        .count();
    assert!(small <= 7, "{} of 50", small);
}

#[test]
fn slater_test_without_comparisons_is_a_domain_error() {
    let dir = tmp();
    let path = write(dir.path(), "z.csv", "0,0\n0,0\n");
    assert_eq!(run(&["slater-test", &path]).status.code(), Some(2));
}

#[test]
fn thread_cap_from_flag_and_environment() {
    let dir = tmp();
    let path = write(dir.path(), "ex1.csv", EXAMPLE_ONE);
    let expected = json(&["spectrum", &path]);
    assert_eq!(json(&["--threads", "1", "spectrum", &path]), expected);
    let out = bin()
        .env("RANKABILITY_THREADS", "2")
        .args(["spectrum", &path])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        serde_json::from_slice::<Value>(&out.stdout).unwrap(),
        expected
    );
    let out = bin()
        .env("RANKABILITY_THREADS", "0")
        .args(["spectrum", &path])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
