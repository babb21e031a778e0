use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_shor-noise");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap()
}

#[test]
fn figure_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for ext in ["csv", "json"] {
        let a = dir.path().join(format!("a.{ext}"));
        let b = dir.path().join(format!("b.{ext}"));
        for path in [&a, &b] {
            let out = run(&[
                "figure",
                "3",
                "--seed",
                "12",
                "--trials",
                "4",
                "--svg",
                "--out",
                path.to_str().unwrap(),
            ]);
            assert!(
                out.status.success(),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
        assert_eq!(read(&a), read(&b));
        assert_eq!(
            read(&a.with_extension("svg")),
            read(&b.with_extension("svg"))
        );
    }
    let json: serde_json::Value =
        serde_json::from_slice(&read(&dir.path().join("a.json"))).unwrap();
    assert_eq!(json["metadata"]["seed"], 12);
    let svg = String::from_utf8(read(&dir.path().join("a.svg"))).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn stdout_csv_is_deterministic() {
    let a = run(&["figure", "4", "--seed", "3", "--gate-level"]);
    let b = run(&["figure", "4", "--seed", "3", "--gate-level"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with(b"c,p,series\n"));
}

#[test]
fn shor_and_threshold_are_deterministic() {
    let shor = [
        "shor", "--n", "15", "--y", "7", "--mode", "em2u", "--smax", "0.1", "--trials", "200",
        "--seed", "4",
    ];
    let a = run(&shor);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&shor).stdout);
    let summary: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(summary["estimate"]["trials"], 200);

    let th = [
        "threshold",
        "--mode",
        "em2g",
        "--trials",
        "100",
        "--seed",
        "2",
        "--grid",
        "0.01,0.1",
    ];
    let a = run(&th);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&th).stdout);
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(code(&["figure", "7"]), 2);
    assert_eq!(code(&["shor", "--n", "13"]), 2);
    assert_eq!(code(&["shor", "--mode", "em9"]), 2);
    assert_eq!(code(&["threshold", "--grid", "0.5,0.1"]), 2);
    assert_eq!(code(&["figure", "1", "--svg"]), 2);
    assert_eq!(code(&["figure"]), 2);
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing/dir/out.csv");
    assert_eq!(code(&["figure", "1", "--out", bad.to_str().unwrap()]), 3);
}

#[test]
fn lucky_factor_exits_4() {
    let out = run(&["shor", "--n", "15", "--y", "6"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("lucky factor: 3 divides 15"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 5\ntrials = 3\nformat = \"json\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = run(&["--config", cfg, "figure", "3"]);
    assert!(from_file.status.success());
    let v: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(v["metadata"]["seed"], 5);
    assert_eq!(v["metadata"]["parameters"]["trials"], 3);

    let overridden = run(&["--config", cfg, "figure", "3", "--seed", "8"]);
    let v: serde_json::Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!(v["metadata"]["seed"], 8);
    assert_eq!(v["metadata"]["parameters"]["trials"], 3);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "colour = 1\n").unwrap();
    assert_eq!(code(&["--config", bad.to_str().unwrap(), "figure", "1"]), 2);
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
