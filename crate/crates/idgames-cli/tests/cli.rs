//! End-to-end checks of the binary: output formats, determinism, bundled
//! games, and the error-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idgames"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("idgames-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn enumerate_csv_rows_sum_to_the_function_count() {
    let out = run(&["enumerate", "--scenario", "2,2,2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("representative,orbit_size"));
    let total: u64 = lines
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 256);
}

#[test]
fn bounds_of_the_bundled_addition_game() {
    let out = run(&[
        "bounds",
        "--game",
        "addition",
        "--restarts",
        "8",
        "--threads",
        "1",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["omega_cl"]["num"], "3");
    assert_eq!(doc["omega_cl"]["den"], "8");
    assert_eq!(doc["omega_ns"]["num"], "1");
    assert_eq!(doc["omega_ns"]["den"], "2");
    let q = doc["omega_q_lower"].as_f64().unwrap();
    assert!(q > 0.42 && q < 0.5, "quantum lower bound {q}");
}

#[test]
fn bounds_accepts_text_tables() {
    let path = tmp("game.txt");
    std::fs::write(
        &path,
        "x2\\x1 (y2,y1)  0  1  2\n0  0,0  0,0  0,0\n1  0,0  1,1  1,1\n2  0,1  0,1  1,1\n",
    )
    .unwrap();
    let out = run(&[
        "bounds",
        "--game",
        path.to_str().unwrap(),
        "--restarts",
        "4",
        "--threads",
        "1",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["omega_cl"]["num"], "4");
    assert_eq!(doc["omega_cl"]["den"], "9");
    std::fs::remove_file(path).ok();
}

#[test]
fn identical_configs_produce_identical_files() {
    let a = tmp("a.json");
    let b = tmp("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "quantum",
            "--game",
            "three_input_example",
            "--dims",
            "2,2",
            "--restarts",
            "6",
            "--seed",
            "7",
            "--threads",
            "2",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let ba = std::fs::read(&a).unwrap();
    let bb = std::fs::read(&b).unwrap();
    assert_eq!(ba, bb);
    std::fs::remove_file(a).ok();
    std::fs::remove_file(b).ok();
}

#[test]
fn counting_curve_is_csv() {
    let out = run(&[
        "counting", "--n", "2", "--omega", "0.375", "--m-from", "60", "--m", "64", "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("m,hstar,mprime,log_total,log_fraction_bound"));
    assert_eq!(text.lines().count(), 6);
    let last = text.lines().next_back().unwrap();
    let bound: f64 = last.split(',').next_back().unwrap().parse().unwrap();
    assert!((bound - -97.0).abs() < 0.5);
}

#[test]
fn thread_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_idgames"))
        .args(["quantum", "--game", "addition", "--restarts", "4", "--seed", "1"])
        .env("IDGAMES_THREADS", "1")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["value"].as_f64().unwrap() > 0.3);
}

#[test]
fn unknown_games_fail_with_a_machine_parsable_code() {
    let out = run(&["bounds", "--game", "no_such_game"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: E_GAME:"), "stderr was {err:?}");
}

#[test]
fn malformed_scenarios_fail_with_a_machine_parsable_code() {
    let out = run(&["census", "--scenario", "2;3;2"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: E_PARSE:"), "stderr was {err:?}");
}

#[test]
fn bundled_games_match_the_library_constructors() {
    for (name, f) in idgames::games::all_named() {
        let out = run(&[
            "bounds",
            "--game",
            name,
            "--restarts",
            "1",
            "--threads",
            "1",
        ]);
        assert!(out.status.success(), "bounds failed for {name}");
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let cl = idgames::classical::optimal_classical(&f).unwrap().value;
        assert_eq!(
            doc["omega_cl"]["num"].as_str().unwrap(),
            cl.numer().to_string()
        );
        assert_eq!(
            doc["omega_cl"]["den"].as_str().unwrap(),
            cl.denom().to_string()
        );
    }
}
