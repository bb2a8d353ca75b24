use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn qelect(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qelect"))
        .args(args)
        .output()
        .expect("spawn qelect")
}

fn run_to(dir: &Path, tag: &str, args: &[&str]) -> (String, String) {
    let trace = dir.join(format!("{tag}.jsonl"));
    let summary = dir.join(format!("{tag}.csv"));
    let mut full = vec!["run"];
    full.extend_from_slice(args);
    let (t, s) = (trace.to_str().unwrap(), summary.to_str().unwrap());
    full.extend_from_slice(&["--trace", t, "--summary", s]);
    let out = qelect(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    (
        fs::read_to_string(trace).unwrap(),
        fs::read_to_string(summary).unwrap(),
    )
}

fn summary_field(csv: &str, name: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    row[i].to_string()
}

#[test]
fn single_w_state_trial_writes_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let (trace, summary) = run_to(
        dir.path(),
        "w",
        &[
            "--algorithm",
            "w-state",
            "--n",
            "3",
            "--trials",
            "1",
            "--seed",
            "7",
        ],
    );
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines.len(), 1);
    let v: Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v["k_after"], 1);
    assert_eq!(
        v["values"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|x| *x == 1)
            .count(),
        1
    );
    assert_eq!(
        summary.lines().next().unwrap(),
        "algorithm,n,trials,mean_rounds,max_rounds,chi_square,budget_exhausted"
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--algorithm",
        "tani2",
        "--n",
        "6",
        "--trials",
        "1000",
        "--seed",
        "42",
    ];
    let a = run_to(dir.path(), "a", &args);
    let b = run_to(dir.path(), "b", &args);
    assert_eq!(a, b);
    let c = run_to(
        dir.path(),
        "c",
        &[
            "--algorithm",
            "tani2",
            "--n",
            "6",
            "--trials",
            "1000",
            "--seed",
            "43",
        ],
    );
    assert_ne!(a.0, c.0);
}

#[test]
fn trace_lines_follow_schema() {
    let dir = tempfile::tempdir().unwrap();
    for alg in ["w-state", "tani2", "classical", "tournament"] {
        let (trace, _) = run_to(
            dir.path(),
            alg,
            &[
                "--algorithm",
                alg,
                "--n",
                "5",
                "--trials",
                "50",
                "--seed",
                "3",
            ],
        );
        let mut last: Option<(u64, u64)> = None;
        for line in trace.lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            let obj = v.as_object().unwrap();
            let keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
            for key in [
                "trial", "round", "k", "branch", "s_bit", "values", "k_after",
            ] {
                assert!(keys.contains(&key), "{alg}: missing {key} in {line}");
            }
            assert_eq!(keys.len(), 7);
            let branch = v["branch"].as_str().unwrap();
            assert!([
                "inconsistent",
                "consistent_even",
                "consistent_odd",
                "classical",
                "w_state",
                "tournament"
            ]
            .contains(&branch));
            assert!(v["s_bit"].is_null() || v["s_bit"] == 0 || v["s_bit"] == 1);
            let trial = v["trial"].as_u64().unwrap();
            let round = v["round"].as_u64().unwrap();
            match last {
                Some((t, r)) if t == trial => assert_eq!(round, r + 1),
                _ => assert_eq!(round, 1),
            }
            last = Some((trial, round));
        }
    }
}

#[test]
fn classical_tail_shows_in_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (_, summary) = run_to(
        dir.path(),
        "cl",
        &[
            "--algorithm",
            "classical",
            "--n",
            "2",
            "--trials",
            "100000",
            "--seed",
            "1",
        ],
    );
    let max: usize = summary_field(&summary, "max_rounds").parse().unwrap();
    assert!(max > 10, "max_rounds {max}");
    assert_eq!(summary_field(&summary, "budget_exhausted"), "0");
}

#[test]
fn exit_codes() {
    assert_eq!(
        qelect(&["run", "--algorithm", "raft", "--n", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qelect(&["run", "--algorithm", "tani2", "--n", "3", "--trials", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qelect(&["run", "--algorithm", "tani2", "--n", "9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qelect(&["run", "--algorithm", "w-state", "--n", "21"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qelect(&[
            "run",
            "--algorithm",
            "tani2",
            "--n",
            "3",
            "--trace",
            "/nonexistent/dir/t.jsonl"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        qelect(&["run", "--algorithm", "tani2", "--n", "3"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn verify_reports_each_identity() {
    let out = qelect(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().all(|l| l.starts_with("PASS ")));
    assert!(stdout.contains("U zeroes |0^k> and |1^k> (k=12)"));
    assert!(stdout.contains("V zeroes all four repeated pairs (k=9)"));

    let out = qelect(&["verify", "--k-min", "2", "--k-max", "2"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("(k=2)"));
    assert!(!stdout.contains("of V"));

    let out = qelect(&["verify", "--k-max", "2", "--corrupt-even-breaker"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("unitarity of U (k=2)"));
}
