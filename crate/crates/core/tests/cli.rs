use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_halpern"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_trace_with_expected_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.csv");
    let o = run(&[
        "run",
        "--config",
        s(&config("identity_halpern.toml")),
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,alpha_n,beta_n,residual_T,residual_S,dist_to_target,x_0,x_1,x_2,x_3"
    );
    let rows: Vec<&str> = lines.collect();
    // stride 100 over n = 1..=1000
    assert_eq!(rows.len(), 11);
    assert!(rows.last().unwrap().starts_with("1000,"));
    let summary = String::from_utf8_lossy(&o.stdout);
    assert!(summary.contains("status=max_iters_reached"), "{summary}");
}

#[test]
fn seed_override_keeps_run_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let cfg = config("two_box_case_ii.toml");
    for out in [&a, &b] {
        let o = run(&["run", "--config", s(&cfg), "--out", s(out), "--seed", "99"]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn print_config_round_trips() {
    let o = run(&[
        "run",
        "--config",
        s(&config("two_box_case_iii.toml")),
        "--print-config",
    ]);
    assert!(o.status.success());
    let printed = String::from_utf8(o.stdout).unwrap();
    let reparsed = halpern::ExperimentConfig::from_toml_str(&printed).unwrap();
    let original = halpern::ExperimentConfig::from_path(&config("two_box_case_iii.toml")).unwrap();
    assert_eq!(reparsed, original);
}

#[test]
fn rejected_schedule_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let o = run(&[
        "run",
        "--config",
        s(&config("summable_anchor_rejected.toml")),
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha lacks sum_diverges"));
    assert!(!out.exists());
}

#[test]
fn unknown_key_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(config("identity_halpern.toml")).unwrap();
    std::fs::write(
        &path,
        text.replace("max_iters = 999", "max_iters = 999\nmaxiters = 5"),
    )
    .unwrap();
    let o = run(&["run", "--config", s(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("maxiters"));
}

#[test]
fn certify_passes_for_projection() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = run(&[
        "certify",
        "--config",
        s(&config("projection_certify.toml")),
        "--out",
        s(&out),
        "--workers",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let report = std::fs::read_to_string(&out).unwrap();
    assert!(report.lines().skip(1).all(|l| !l.contains(",fail,")));
    assert!(report.contains("quasi_firmly_two_point[delta=0.9]"));
}

#[test]
fn certify_fails_for_expansive_map() {
    let o = run(&["certify", "--config", s(&config("expansive_certify.toml"))]);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let row = stdout
        .lines()
        .find(|l| l.starts_with("nonexpansive,"))
        .unwrap();
    assert!(row.contains(",fail,"), "{row}");
}

#[test]
fn certify_report_does_not_depend_on_workers() {
    let cfg = config("projection_certify.toml");
    let one = run(&["certify", "--config", s(&cfg), "--workers", "1"]);
    let three = run(&["certify", "--config", s(&cfg), "--workers", "3"]);
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn path_writes_decreasing_norms() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("path.csv");
    let o = run(&[
        "path",
        "--config",
        s(&config("rotation_path.toml")),
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let norms: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
            f[1].hypot(f[2])
        })
        .collect();
    assert_eq!(norms.len(), 3);
    assert!(norms[0] > norms[1] && norms[1] > norms[2]);
}

#[test]
fn path_rejects_iterative_scheme() {
    let o = run(&["path", "--config", s(&config("identity_halpern.toml"))]);
    assert_eq!(o.status.code(), Some(2));
}
