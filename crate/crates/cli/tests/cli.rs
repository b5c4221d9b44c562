use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn data() -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "moonshine.json"].iter().collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genmoon")).args(args).output().expect("spawn genmoon")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn multtable_1a_has_monster_entry() {
    let o = run(&["--data", &data(), "multtable", "--class", "1A", "--amax", "1", "--bmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "1\t1\t196884"), "{out}");
    assert!(out.lines().any(|l| l == "1\t-1\t1"), "{out}");
    let summary = out.lines().find_map(|l| l.strip_prefix("# ")).expect("summary line");
    let v: serde_json::Value = serde_json::from_str(summary).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn super_cocycle_has_no_trivialization() {
    let sup = fixture("super.coc");
    let o = run(&["coh", "trivialize", "--in", &sup]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "no trivialization: trace Q(1) = e(1/2)");

    let o = run(&["coh", "check", "--group", "2", "--in", &sup]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["coh", "trace", "--in", &sup]);
    assert!(stdout(&o).contains("1\t-1"));
}

#[test]
fn coboundary_trivializes() {
    // d²(λ) itself is trivialized, and the output is a 2-cochain table.
    let d2 = run(&["coh", "d2", "--in", &fixture("eta.c2")]);
    assert_eq!(d2.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("genmoon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d2.coc");
    std::fs::write(&path, d2.stdout).unwrap();
    let o = run(&["coh", "trivialize", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("group 2\n"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn non_cocycle_is_a_check_failure() {
    let o = run(&["coh", "check", "--in", &fixture("bad.coc")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Hexagon"));
    let o = run(&["coh", "check", "--in", &fixture("semion.coc")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn group_mismatch_is_usage_error() {
    let o = run(&["coh", "check", "--group", "3", "--in", &fixture("super.coc")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_shipped_data() {
    let o = run(&["validate-data", "--file", &data()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("4B\tchecksum\tpass"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn corrupted_checksum_is_reported() {
    let text = std::fs::read_to_string(data()).unwrap().replacen("\"196884\"", "\"196885\"", 1);
    let dir = std::env::temp_dir().join(format!("genmoon-val-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, text).unwrap();
    let o = run(&["validate-data", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("1A\tchecksum\tFAIL\tchecksum mismatch at index 2: expected 196885, got 196884"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_and_range_errors_exit_2() {
    assert_eq!(run(&["char", "--class", "1A", "--order", "100000"]).status.code(), Some(2));
    assert_eq!(run(&["char", "--class", "99Z"]).status.code(), Some(2));
    assert_eq!(run(&["multtable", "--class", "1A", "--amax", "50"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-verb"]).status.code(), Some(2));
    assert_eq!(run(&["quant", "--class", "1A"]).status.code(), Some(2));
    assert_eq!(run(&["--data", "/nonexistent.json", "hyp", "--class", "1A"]).status.code(), Some(2));
}

#[test]
fn denom_detects_perturbation() {
    let ok = run(&["denom", "--order", "6"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("c(0) = 0"));
    let bad = run(&["denom", "--order", "6", "--perturb-c1", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).starts_with("differs at p^2 q^1"));
}

#[test]
fn json_output_parses() {
    let o = run(&["--format", "json", "char", "--class", "2B", "--order", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let terms = v["series"]["terms"].as_array().unwrap();
    assert_eq!(terms[0], serde_json::json!(["-1", "1"]));
    assert!(terms.contains(&serde_json::json!(["1", "276"])));
}

#[test]
fn char_s_transform_of_2b() {
    let out = stdout(&run(&["char", "--class", "2B", "--order", "1", "--s"]));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "0\t24");
    assert_eq!(rows[1], "1/2\t4096");
}

#[test]
fn fhat_and_hyp_for_4b() {
    let o = run(&["fhat", "--class", "4B", "--i", "2", "--j", "1", "--order", "1", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# case analysis\tnot applicable"));
    let o = run(&["hyp", "--class", "4B"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn quant_matches_brst() {
    let o = run(&["quant", "--class", "1A", "--zero"]);
    assert_eq!(stdout(&o).trim(), "quant\t2");
    let o = run(&["quant", "--class", "2A", "--norm", "-1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("agree\ttrue"));
}

#[test]
fn lattice_and_embed() {
    let o = run(&["lattice", "--type", "4|2+"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("group\t"));
    let o = run(&["embed-check", "--exps", "1,1,1,0,0,0", "--diagram", "star", "--order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.ends_with("commutes")));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["multtable", "--class", "4B", "--amax", "2", "--bmax", "8"][..],
        &["--format", "json", "fhat", "--class", "3C", "--i", "1", "--j", "2", "--order", "2"][..],
        &["coh", "trivialize", "--in", &fixture("eta.c2")][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
