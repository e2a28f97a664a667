use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use kdemode::{kde, PointSet};
use serde_json::Value;
use tempfile::TempDir;

fn kdemode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdemode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(
    dir: &TempDir,
    name: &str,
    components: &[&str],
    n: usize,
    seed: u64,
) -> std::path::PathBuf {
    let out = dir.path().join(name);
    let n = n.to_string();
    let seed = seed.to_string();
    let mut args = vec![
        "generate",
        "--n",
        &n,
        "--seed",
        &seed,
        "--output",
        path_str(&out),
    ];
    for c in components {
        args.push("--component");
        args.push(c);
    }
    let o = kdemode(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn solve(input: &Path, algorithm: &str, extra: &[&str]) -> Output {
    let mut args = vec![
        "solve",
        "--input",
        path_str(input),
        "--algorithm",
        algorithm,
        "--eps",
        "0.3",
        "--rho",
        "0.2",
        "--delta",
        "0.2",
        "--seed",
        "7",
    ];
    args.extend_from_slice(extra);
    kdemode(&args)
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn load(path: &Path) -> PointSet {
    let rows: Vec<Vec<f64>> = fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    PointSet::new(&rows).unwrap()
}

#[test]
fn zero_scale_component_repeats_the_mean() {
    let dir = TempDir::new().unwrap();
    let out = generate(&dir, "p.csv", &["1;2.5,-1;0"], 5, 0);
    assert_eq!(fs::read_to_string(&out).unwrap(), "2.5,-1\n".repeat(5));
    let sidecar: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("p.spec.json")).unwrap()).unwrap();
    assert_eq!(sidecar["seed"], 0);
    assert_eq!(sidecar["n"], 5);
    assert_eq!(sidecar["spec"]["components"][0]["mean"][0], 2.5);
}

#[test]
fn generation_is_byte_identical_per_seed() {
    let dir = TempDir::new().unwrap();
    let a = generate(&dir, "a.csv", &["1;0,0;0.5", "2;3,3;0.2"], 200, 11);
    let b = generate(&dir, "b.csv", &["1;0,0;0.5", "2;3,3;0.2"], 200, 11);
    let c = generate(&dir, "c.csv", &["1;0,0;0.5", "2;3,3;0.2"], 200, 12);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn spec_file_matches_component_flags() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"components": [{"weight": 1, "mean": [0, 1], "scale": 0.3}]}"#,
    )
    .unwrap();
    let out = dir.path().join("s.csv");
    let o = kdemode(&[
        "generate",
        "--spec",
        path_str(&spec),
        "--n",
        "30",
        "--seed",
        "4",
        "--output",
        path_str(&out),
    ]);
    assert!(o.status.success());
    let flags = generate(&dir, "f.csv", &["1;0,1;0.3"], 30, 4);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&flags).unwrap());
}

#[test]
fn round_trip_recomputes_value() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "p.csv", &["1;0,0;0.4", "1;1.5,0;0.4"], 80, 3);
    let out = dir.path().join("r.json");
    let o = solve(&input, "grid-poly", &["--output", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let record: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    for key in [
        "algorithm",
        "x",
        "value",
        "eps",
        "rho",
        "delta",
        "seed",
        "n",
        "d",
        "m_used",
        "elapsed_ms",
    ] {
        assert!(record.get(key).is_some(), "missing {key}");
    }
    let x: Vec<f64> = serde_json::from_value(record["x"].clone()).unwrap();
    let value = record["value"].as_f64().unwrap();
    assert!((kde(&load(&input), &x).unwrap() - value).abs() <= 1e-12);
    assert_eq!(record["n"], 80);
    assert_eq!(record["d"], 2);
    assert_eq!(record["algorithm"], "grid-poly");
    assert!(record["m_used"].is_null());
}

#[test]
fn output_is_deterministic_apart_from_timing() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "p.csv", &["1;0,0,0,0,0,0;0.2"], 60, 5);
    for algorithm in ["highdim", "meanshift", "oracle-ms"] {
        let mut a = json(&solve(&input, algorithm, &[]));
        let mut b = json(&solve(&input, algorithm, &[]));
        a.as_object_mut().unwrap().remove("elapsed_ms");
        b.as_object_mut().unwrap().remove("elapsed_ms");
        assert_eq!(a, b, "{algorithm}");
    }
}

#[test]
fn single_point_oracle_value_is_one() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("one.csv");
    fs::write(&input, "0.5,-0.25\n").unwrap();
    let r = json(&solve(&input, "oracle-grid", &[]));
    assert_eq!(r["value"], 1.0);
}

#[test]
fn grid_poly_is_within_eps_rho_of_grid_oracle() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "p.csv", &["1;0,0;0.4", "1;2,1;0.3"], 120, 8);
    let a = json(&solve(&input, "grid-poly", &[]));
    let b = json(&solve(&input, "oracle-grid", &[]));
    let (va, vb) = (a["value"].as_f64().unwrap(), b["value"].as_f64().unwrap());
    assert!(va >= vb - 0.3 * 0.2, "{va} vs {vb}");
}

#[test]
fn rect2d_rejects_three_dimensions() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "p.csv", &["1;0,0,0;1"], 10, 0);
    let o = solve(&input, "rect2d", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dimension"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "p.csv", &["1;0,0;1"], 50, 0);
    assert_eq!(
        solve(
            &input,
            "oracle-grid",
            &["--constant-overrides", "grid_budget=10"]
        )
        .status
        .code(),
        Some(3)
    );
    assert_eq!(solve(&input, "nonsense", &[]).status.code(), Some(2));
    assert_eq!(
        solve(&input, "highdim", &["--constant-overrides", "bogus=1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kdemode(&[
            "solve",
            "--input",
            path_str(&input),
            "--algorithm",
            "meanshift",
            "--eps",
            "1.5",
            "--rho",
            "0.2"
        ])
        .status
        .code(),
        Some(2)
    );
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1,2\n3,oops\n").unwrap();
    assert_eq!(solve(&bad, "meanshift", &[]).status.code(), Some(2));
    assert_eq!(
        solve(&dir.path().join("missing.csv"), "meanshift", &[])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        kdemode(&["verify", "--suite", "nonsense"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_reports_full_suites() {
    for (suite, trials) in [("meanshift", 500), ("depth", 500)] {
        let report = json(&kdemode(&["verify", "--suite", suite]));
        assert_eq!(report["passed"], true);
        let check = &report["checks"][0];
        assert_eq!(check["trials"], trials);
        assert_eq!(check["failures"], 0);
    }
}
