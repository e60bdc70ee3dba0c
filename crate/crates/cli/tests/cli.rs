use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn laver(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["laver", "--no-cache"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = laver_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--format", "json"];
    a.extend_from_slice(args);
    let (code, out, err) = laver(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn scalar_queries() {
    assert_eq!(
        laver(&["apply", "--n", "9", "--a", "48", "--b", "51"]).1,
        "243\n"
    );
    assert_eq!(
        laver(&["apply", "--n", "3", "--a", "2", "--b", "3"]).1,
        "7\n"
    );
    assert_eq!(laver(&["period", "--n", "3", "--a", "5"]).1, "2\n");
    assert_eq!(laver(&["threshold", "--n", "10", "--a", "34"]).1, "5\n");
    assert_eq!(
        laver(&["compose", "--n", "9", "--a", "34", "--b", "4"]).1,
        "242\n"
    );
    assert_eq!(laver(&["crit", "--a", "12"]).1, "γ_2\n");
    assert_eq!(
        laver(&["act", "--a", "51", "--k", "3", "--bound", "9"]).1,
        "γ_7\n"
    );
    assert_eq!(laver(&["range", "--a", "242", "--gamma", "9"]).1, "no\n");
    assert_eq!(
        laver(&["range", "--a", "48", "--gamma", "9"]).1,
        "yes: 48 γ_7 = γ_9\n"
    );
    assert_eq!(
        laver(&["eval", "--word", "(1*1)*(1*1)", "--n", "3"]).1,
        "[w]_3 = 4\ncrit = γ_2\n"
    );
}

#[test]
fn uncertified_answers_say_so() {
    let (code, out, _) = laver(&["act", "--a", "48", "--k", "7", "--bound", "9"]);
    assert_eq!(code, 0);
    assert_eq!(out, ">= γ_9 (uncertified below A_9)\n");
}

#[test]
fn json_documents_are_key_sorted() {
    let (_, out, _) = laver(&["--format", "json", "period", "--n", "3", "--a", "5"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["period"], 2);
    assert_eq!(v["command"]["name"], "period");
    assert!(v.get("timing").is_none());
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "config", "result"]);
    let result = &out[out.find("\"result\"").unwrap()..];
    let pos = |k: &str| result.find(&format!("\"{k}\"")).unwrap();
    assert!(
        pos("a") < pos("log_period") && pos("log_period") < pos("n") && pos("n") < pos("period")
    );

    let v = json(&["--timing", "crit", "--a", "8"]);
    assert!(v["timing"]["elapsed_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn csv_table_dump() {
    let (code, out, _) = laver(&["--format", "csv", "build", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "a,b,value\n0,1,1\n0,2,2\n0,3,3\n0,4,0\n1,1,2\n1,2,0\n2,1,3\n2,2,0\n3,1,0\n"
    );
    let (_, out, _) = laver(&[
        "--format", "csv", "apply", "--n", "3", "--a", "2", "--b", "3",
    ]);
    assert_eq!(out, "n,a,b,value\n3,2,3,7\n");
}

#[test]
fn build_rows() {
    let (code, out, _) = laver(&["build", "--n", "2", "--rows"]);
    assert_eq!(code, 0);
    assert!(out.contains("0: 1 2 3 0\n1: 2 0\n2: 3 0\n3: 0\n"), "{out}");
    let v = json(&["build", "--n", "1", "--rows"]);
    assert_eq!(v["result"]["rows"], serde_json::json!([[1, 0], [0]]));
}

#[test]
fn verify_reports() {
    let (code, out, _) = laver(&["verify", "th", "twin", "--n", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out, "th n=5: verified (31 checked, 31 qualifying)\ntwin n=5: verified (15 checked, 3 qualifying)\n");
    let v = json(&["verify", "uh", "--n", "8", "--upto"]);
    let reports = v["result"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 8);
    assert!(reports.iter().all(|r| r["status"] == "verified"));
}

#[test]
fn verify_outside_domain_or_limits() {
    let (code, _, err) = laver(&["verify", "twin", "--n", "4"]);
    assert_eq!(code, 1);
    assert!(err.contains("not defined"), "{err}");
    let (code, _, err) = laver(&["verify", "nonsense", "--n", "4"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown check"), "{err}");
    // A_9 needs more than 5000 entries
    let (code, out, _) = laver(&["--max-entries", "5000", "verify", "th", "--n", "8"]);
    assert_eq!(code, 1);
    assert_eq!(out, "th n=8: resource-limited (0 checked, 0 qualifying)\n");
}

#[test]
fn enumerate_formats() {
    let (code, out, _) = laver(&["enumerate", "--below", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "γ_0\nγ_1\n1\"γ_1\nγ_2\n3\"γ_1\n");
    assert_eq!(laver(&["enumerate", "--below", "1"]).1, "γ_0\n");
    let (_, out, _) = laver(&["--format", "tex", "enumerate", "--below", "2"]);
    assert_eq!(
        out,
        "$$\\gamma_{0}$$\n$$\\gamma_{1}$$\n$$1\"\\gamma_{1}$$\n"
    );
    let v = json(&["enumerate", "--below", "3", "--check"]);
    assert_eq!(
        v["result"]["lines"],
        serde_json::json!(["γ_0", "γ_1", "1\"γ_1", "γ_2", "3\"γ_1"])
    );
    assert_eq!(
        v["result"]["ordinals"][4],
        serde_json::json!({"kind": "pair", "coef": 3, "cof": 1, "interval": 2})
    );
    assert_eq!(v["result"]["invariant_violations"], serde_json::json!([]));
    let (code, _, err) = laver(&["--format", "tex", "crit", "--a", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("only available"));
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = laver(&["apply", "--n", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("--a"), "{err}");
    assert_eq!(laver(&["apply", "--n", "3", "--a", "8", "--b", "1"]).0, 1);
    assert_eq!(laver(&["threshold", "--n", "3", "--a", "7"]).0, 1);
    assert_eq!(laver(&["crit", "--a", "0"]).0, 1);
    assert_eq!(laver(&["eval", "--word", "1*"]).0, 1);
    let (code, out, _) = laver(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("enumerate"));
}

#[test]
fn selftest_passes() {
    let (code, out, _) = laver(&["selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("12 of 12 vectors passed\n"));
}

#[test]
fn cache_directory_from_environment() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_laver"))
        .args(["build", "--n", "5"])
        .env("LAVER_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("A5.lavr").is_file());

    // a damaged file is rebuilt by default and rejected under --strict-cache
    std::fs::write(dir.path().join("A5.lavr"), b"LAVR\x01\x05garbage").unwrap();
    let strict = Command::new(env!("CARGO_BIN_EXE_laver"))
        .args(["--strict-cache", "period", "--n", "5", "--a", "0"])
        .env("LAVER_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("A5.lavr"));
    let lenient = Command::new(env!("CARGO_BIN_EXE_laver"))
        .args(["period", "--n", "5", "--a", "0"])
        .env("LAVER_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(lenient.status.success());
    assert_eq!(String::from_utf8_lossy(&lenient.stdout), "32\n");
}

#[test]
fn cache_flag_overrides_environment() {
    let env_dir = TempDir::new().unwrap();
    let flag_dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_laver"))
        .args(["build", "--n", "3", "--cache-dir"])
        .arg(flag_dir.path())
        .env("LAVER_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(flag_dir.path().join("A3.lavr").is_file());
    assert!(!env_dir.path().join("A3.lavr").exists());
}
