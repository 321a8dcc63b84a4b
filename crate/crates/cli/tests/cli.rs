use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothspace"))
        .args(args)
        .env_remove("SMOOTHSPACE_TOL")
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_smoothspace"))
        .args(args)
        .env_remove("SMOOTHSPACE_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_first_order_pair() {
    let out = run(&["classify", "d1", "d2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outcome"], "NotComplemented");
    assert_eq!(v["rule"], "theorem-main");
}

#[test]
fn classify_square_with_same_direction() {
    let out = run(&["classify", "d1^2+2 d1 d2+d2^2", "d1+d2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outcome"], "IsomorphicCK");
}

#[test]
fn classify_from_file() {
    let dir = std::env::temp_dir().join(format!("smoothspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ops.txt");
    std::fs::write(&path, "# pair\nd1^3\n\nd2^2 # second\n").unwrap();
    let out = run(&["classify", "--file", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(json(&out)["outcome"], "NotComplemented");
}

#[test]
fn strict_undecided_exits_one() {
    let args = ["classify", "1", "d1 + 1.41421356 d2"];
    let lax = run(&args);
    assert_eq!(lax.status.code(), Some(0));
    assert_eq!(json(&lax)["outcome"], "Undecided");
    let mut strict = args.to_vec();
    strict.insert(1, "--strict");
    assert_eq!(run(&strict).status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    let bad = run(&["classify", "d1 +* d2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("parse error"));
    assert_eq!(run(&["classify", "d1^65"]).status.code(), Some(2));
    assert_eq!(run(&["classify"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "/nonexistent/problem.json"]).status.code(), Some(2));
    assert_eq!(run(&["--tol", "bogus=1", "selftest"]).status.code(), Some(2));
}

#[test]
fn diagram_matches_fixture() {
    let out = run(&["diagram", "2*pi*i*d1 - d2^2"]);
    let want: Value = serde_json::from_str(include_str!("../../core/tests/fixtures/diagram_parabola.json")).unwrap();
    assert_eq!(json(&out), want);
}

#[test]
fn solve_reads_stdin() {
    let problem = r#"{"k":1,"l":1,"mus":[[{"m":1,"n":1,"re":0,"im":-1}],[{"m":1,"n":1,"re":0,"im":1}]]}"#;
    let out = run_stdin(&["solve", "-"], problem);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["residual"], 0.0);
    let re = v["phis"][0][0]["re"].as_f64().unwrap();
    assert!((re - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn solve_rejects_incompatible_data() {
    let problem = r#"{"k":1,"l":1,"mus":[[{"m":1,"n":1,"re":1,"im":0}],[{"m":1,"n":1,"re":1,"im":0}]]}"#;
    let out = run_stdin(&["solve", "-"], problem);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual"));
}

#[test]
fn counterexample_ladder() {
    let out = run(&[
        "verify",
        "counterexample",
        "--k",
        "1",
        "--l",
        "1",
        "--N",
        "1",
        "--delta",
        "0.25",
        "--Pmax",
        "4096",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let sums = v["partialSums"].as_array().unwrap();
    assert_eq!(sums.len(), 10);
    assert_eq!(sums.last().unwrap()["P"], 4096);
    let s: Vec<f64> = sums.iter().map(|x| x["S"].as_f64().unwrap()).collect();
    assert!(s.windows(2).all(|w| w[1] > w[0]));
    assert!(v["cpqMax"].as_f64().unwrap() <= 1.25);
}

#[test]
fn verify_sweeps_run() {
    let cases: [&[&str]; 5] = [
        &["verify", "dominance", "--operator", "d1 d2", "--node", "1,1", "--M", "16,64"],
        &["verify", "multiplier", "--M", "8,16"],
        &["verify", "oscillatory", "--b", "-1,1", "--eps", "0.01", "--R", "10"],
        &["verify", "gn", "--n", "32", "--samples", "4"],
        &["verify", "embedding", "--radii", "4", "--samples", "3"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        json(&out);
    }
    let v = json(&run(&["verify", "gn", "--n", "32", "--samples", "4"]));
    assert_eq!(v["violations"], 0);
}

#[test]
fn non_subordinate_multiplier_is_input_error() {
    assert_eq!(run(&["verify", "multiplier", "--alpha", "1", "--beta", "1"]).status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["cases"].as_array().unwrap().len(), 7);
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "2*pi*i*d1 - d2^2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["verify", "embedding", "--radii", "4,8", "--samples", "3", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn pretty_is_the_same_json() {
    let plain = json(&run(&["diagram", "d1^3", "d2^2"]));
    let pretty = run(&["--pretty", "diagram", "d1^3", "d2^2"]);
    assert!(String::from_utf8_lossy(&pretty.stdout).contains('\n'));
    assert_eq!(json(&pretty), plain);
}

#[test]
fn tolerance_env_is_read() {
    let out = Command::new(env!("CARGO_BIN_EXE_smoothspace"))
        .args(["selftest"])
        .env("SMOOTHSPACE_TOL", "rank=oops")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
