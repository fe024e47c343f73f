use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use binapprox_cli::record::ResultRecord;
use tempfile::TempDir;

fn binapprox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binapprox")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn record(out: &Output) -> ResultRecord {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    serde_json::from_str(text.lines().next().expect("one record")).unwrap()
}

#[test]
fn means_oracle_finds_cost_two_on_identity() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "id.txt", "2 2\n10\n01\n");
    let out = binapprox(&["solve", "--problem", "means", "--algorithm", "oracle", s(&inst), "-r", "1", "--optimize"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(record(&out).min_cost, Some(2));
}

#[test]
fn planted_instances_solve_and_verify_for_every_algorithm() {
    let dir = TempDir::new().unwrap();
    let cases: [(&str, &[&str], &[&str]); 4] = [
        ("means", &["-r", "2"], &["oracle", "extend", "kernel+extend", "color-coding"]),
        ("gf2", &["-r", "2"], &["oracle", "branch", "extend"]),
        ("pmatrix", &["--pattern", "01;11"], &["oracle", "branch", "extend"]),
        ("boolean", &["-r", "2"], &["oracle", "pattern-enum"]),
    ];
    for (problem, extra, algorithms) in cases {
        let inst = dir.path().join(format!("{problem}.txt"));
        let mut gen = vec!["generate", "--problem", problem, "--rows", "5", "--cols", "5", "--flips", "2", "--seed", "9"];
        gen.extend_from_slice(extra);
        gen.extend_from_slice(&["-o", s(&inst)]);
        assert_eq!(code(&binapprox(&gen)), 0);
        for alg in algorithms {
            let rec = dir.path().join(format!("{problem}-{alg}.jsonl"));
            let out = binapprox(&["solve", "--problem", problem, "--algorithm", alg, s(&inst), "-q", "-o", s(&rec)]);
            assert_eq!(code(&out), 0, "{problem}/{alg}: {}", String::from_utf8_lossy(&out.stderr));
            let verdict = binapprox(&["verify", "--problem", problem, s(&inst), s(&rec)]);
            assert_eq!(code(&verdict), 0, "{problem}/{alg}: {}", String::from_utf8_lossy(&verdict.stdout));
        }
    }
}

#[test]
fn tampered_witnesses_are_rejected() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "a.txt", "# r=2\n3 3\n110\n011\n100\n");
    let out = binapprox(&["solve", "--problem", "gf2", "--algorithm", "branch", s(&inst), "-k", "1"]);
    assert_eq!(code(&out), 0);
    let good = record(&out);
    assert!(good.decision);

    let mut off = good.clone();
    off.cost = off.cost.map(|c| c + 1);
    let path = write(&dir, "off.json", &serde_json::to_string(&off).unwrap());
    assert_eq!(code(&binapprox(&["verify", "--problem", "gf2", s(&inst), s(&path)])), 1);

    let dependent = r#"{"problem":"gf2","algorithm":"branch","r":2,"k":9,"decision":true,
        "witness":{"kind":"gf2","basis":["110","110"],"assignment":[[0],[1],[]]},"wall_ms":0,"nodes":0}"#;
    let path = write(&dir, "dep.json", &dependent.replace('\n', ""));
    let out = binapprox(&["verify", "--problem", "gf2", s(&inst), s(&path)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("dependent"));

    let path = write(&dir, "junk.json", "{\"problem\":\"gf2\"");
    assert_eq!(code(&binapprox(&["verify", "--problem", "gf2", s(&inst), s(&path)])), 6);
}

#[test]
fn exit_statuses_are_distinct() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "a.txt", "2 2\n10\n01\n");
    let bad = write(&dir, "bad.txt", "2 2\n10\n");
    let solve = |file: &Path, extra: &[&str]| {
        let mut args = vec!["solve", "--problem", "gf2", s(file), "-r", "1"];
        args.extend_from_slice(extra);
        code(&binapprox(&args))
    };
    assert_eq!(solve(&bad, &["--algorithm", "branch", "-k", "0"]), 3);
    assert_eq!(solve(&inst, &["--algorithm", "pattern-enum", "-k", "0"]), 4);
    assert_eq!(solve(&inst, &["--algorithm", "branch", "-k", "1", "--decision-exit"]), 10);
    assert_eq!(solve(&inst, &["--algorithm", "branch", "-k", "0", "--decision-exit"]), 11);
    assert_eq!(solve(&inst, &["--algorithm", "branch"]), 7);
    assert_eq!(code(&binapprox(&["solve", "--problem", "nope"])), 2);

    let big = dir.path().join("big.txt");
    let gen = ["generate", "--problem", "gf2", "--rows", "8", "--cols", "8", "-r", "2", "--flips", "6", "-o", s(&big)];
    assert_eq!(code(&binapprox(&gen)), 0);
    let limited = ["solve", "--problem", "gf2", "--algorithm", "branch", s(&big), "--max-nodes", "3", "-k", "6"];
    assert_eq!(code(&binapprox(&limited)), 5);

    let gen = ["generate", "--problem", "means", "--rows", "2", "--cols", "2", "-r", "1", "--flips", "5"];
    assert_eq!(code(&binapprox(&gen)), 7);
}

#[test]
fn generation_is_reproducible() {
    let args = ["generate", "--problem", "boolean", "--rows", "6", "--cols", "7", "-r", "2", "--flips", "3", "--seed", "4"];
    let a = binapprox(&args);
    let b = binapprox(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("# k=3") && text.contains("# flips="));
}

#[test]
fn bench_tables_are_reproducible_and_consistent() {
    let args = [
        "bench", "--problem", "gf2", "--rows", "3,4", "--cols", "4", "-r", "1,2", "--flips", "0,1", "-k", "0,1,2",
        "--seeds", "1,2", "--omit-time",
    ];
    let a = binapprox(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, binapprox(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2 * 3 * 2 * 3);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));

    let empty = binapprox(&["bench", "--problem", "means", "--seeds", "--omit-time"]);
    assert_eq!(code(&empty), 0);
    assert_eq!(String::from_utf8(empty.stdout).unwrap().lines().count(), 1);
}
