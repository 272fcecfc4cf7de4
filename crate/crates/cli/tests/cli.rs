use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_palindrome-lab")).args(args).output().expect("spawning palindrome-lab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_restricted_up_to_ten() {
    let o = lab(&["enumerate", "--base", "10", "--max", "10", "--restricted"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\n7\n");
}

#[test]
fn enumerate_one_digit() {
    let o = lab(&["enumerate", "--base", "10", "--digits", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["1", "2", "3", "4", "5", "6", "7", "8", "9"]);
}

#[test]
fn enumerate_render_adds_digits() {
    let o = lab(&["enumerate", "--base", "2", "--digits", "3", "--render"]);
    assert_eq!(stdout(&o), "5,101\n7,111\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lab(&["enumerate", "--max", "10"]).status.code(), Some(2));
    assert_eq!(lab(&["enumerate", "--base", "1", "--max", "10"]).status.code(), Some(2));
    assert_eq!(lab(&["enumerate", "--base", "10"]).status.code(), Some(2));
    assert_eq!(lab(&["--threads", "0", "vdc"]).status.code(), Some(2));
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn census_small_bound() {
    let o = lab(&["census", "--base", "10", "--max", "100"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows = text.lines();
    assert!(rows.next().unwrap().starts_with("base,scope_kind,scope_value,total,squarefree,"));
    assert!(rows.next().unwrap().starts_with("10,up_to,100,2,2,"));
}

#[test]
fn census_fault_is_detected() {
    let o = lab(&["census", "--base", "10", "--max", "100", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Möbius identity"));
}

#[test]
fn k2_identity_check() {
    let o = lab(&["k2", "--a1", "3", "--a2", "5", "--a3", "-7", "--q", "2", "--c", "4096", "--check-identity"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let diff: f64 = row[11].parse().unwrap();
    assert!(diff < 1e-9 * 64.0, "diff {diff}");
}

#[test]
fn k2_trivial_modulus() {
    let o = lab(&["k2", "--c", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["re"], 1.0);
    assert_eq!(v[0]["im"], 0.0);
}

#[test]
fn poisson_triangle() {
    let o = lab(&["poisson", "--demo", "triangle", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v[0]["diff"].as_f64().unwrap() < 1e-8);
    assert!((v[0]["lhs_re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn poisson_bump_twisted() {
    let o = lab(&["poisson", "--demo", "psi", "--q", "3", "--h", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sbd_strategies_agree() {
    let scan = lab(&["sbd", "--base", "10", "--max", "1000000", "--d", "10,40", "--strategy", "scan"]);
    let mult = lab(&["sbd", "--base", "10", "--max", "1000000", "--d", "10,40", "--strategy", "multiples"]);
    let counts =
        |o: &Output| stdout(o).lines().skip(1).map(|l| l.split(',').nth(4).unwrap().to_owned()).collect::<Vec<_>>();
    assert_eq!(counts(&scan), counts(&mult));
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("palindrome-lab-{}.csv", std::process::id()));
    let direct = lab(&["vdc", "--d", "50"]);
    let to_file = lab(&["vdc", "--d", "50", "--output", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_file(path).ok();
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let args = ["oscillate", "--check", "second", "--count", "20"];
    let one = lab(&[&["--threads", "1"], &args[..]].concat());
    let four = lab(&[&["--threads", "4"], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn thread_count_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_palindrome-lab"))
        .env("PALINDROME_LAB_THREADS", "0")
        .args(["vdc", "--d", "50"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_restricted_up_to_hundred() {
    let o = lab(&["enumerate", "--base", "10", "--max", "100", "--restricted"]);
    assert_eq!(stdout(&o), "1\n7\n");
}

#[test]
fn census_million_row() {
    let o = lab(&["census", "--base", "10", "--max", "1000000", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert!((v[0]["predicted"].as_f64().unwrap() - 0.957804).abs() < 5e-6);
    assert!((v[0]["ratio"].as_f64().unwrap() - 0.957804).abs() < 0.05);
}

#[test]
fn k2_identity_binary_modulus() {
    let o = lab(&[
        "k2",
        "--a1",
        "1",
        "--a2",
        "1",
        "--a3",
        "-1",
        "--q",
        "1",
        "--c",
        "64",
        "--check-identity",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let (re, sre) = (v[0]["re"].as_f64().unwrap(), v[0]["stationary_re"].as_f64().unwrap());
    assert!((re - sre).abs() < 1e-9 * 8.0);
    assert!(v[0]["diff"].as_f64().unwrap() < 1e-9 * 8.0);
}
