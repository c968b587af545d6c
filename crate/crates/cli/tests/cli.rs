use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclomat"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn verify_thm12_q5_passes() {
    let out = run(&["verify", "--q", "5", "--k", "1,2", "--claims", "thm12", "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["status"] == "pass"));
    let a1 = reports.iter().find(|r| r["claim"] == "thm12.a1").unwrap();
    assert_eq!(a1["computed"], "-256");
    let a2 = reports.iter().find(|r| r["claim"] == "thm12.a2").unwrap();
    assert_eq!(a2["computed"], "-4");
}

#[test]
fn invalid_k_is_usage_error() {
    let ok = run(&["verify", "--q", "4", "--k", "3", "--claims", "thm11"]);
    assert!(ok.status.success());
    let bad = run(&["verify", "--q", "4", "--k", "5", "--claims", "thm11"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("does not divide"));
}

#[test]
fn non_prime_power_is_usage_error() {
    let bad = run(&["verify", "--q", "6"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not a prime power"));
}

#[test]
fn hard_bound_is_enforced() {
    let bad = run(&["verify", "--q", "2403"]); // 2403 = 3^3 * 89, and also > 2401
    assert_eq!(bad.status.code(), Some(2));
    let bad = run(&["verify", "--q", "4096"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("hard bound"));
}

#[test]
fn table_q9() {
    let out = run(&["table", "--q", "9", "--k", "2", "--format", "csv", "--no-header"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "q,k,m,det_a,det_b,singular,o_k_p");
    assert_eq!(lines.next().unwrap(), "9,2,4,512,0,true,1");
}

#[test]
fn table_q3_k2_trivial() {
    let out = run(&["table", "--q", "3", "--format", "csv", "--no-header"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3,2,1,-1,-1,false,"), "{text}");
}

#[test]
fn explore_emits_factorization() {
    let out = run(&["explore", "--q", "13", "--k", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["q"], 13);
    assert!(rows[0]["factorization"].as_str().unwrap().contains('*') ||
            !rows[0]["factorization"].as_str().unwrap().is_empty());
    assert_eq!(rows[0]["lambda_moduli"].as_array().unwrap().len(), 4);
}

#[test]
fn explore_m1_det_is_minus_one() {
    let out = run(&["explore", "--q", "7", "--k", "6", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"][0]["det_a"], "-1");
    assert_eq!(v["rows"][0]["sign"], -1);
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["verify", "--q", "9", "--claims", "thm11,thm13", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let args = ["verify", "--q", "7", "--format", "csv", "--no-header"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_dir_env_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cyclomat"))
        .args(["table", "--q", "25", "--k", "2"])
        .env("CYCLOMAT_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let cached: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert!(!cached.is_empty(), "field table cache file written");
}

#[test]
fn full_small_sweep_exits_zero() {
    let out = run(&["verify", "--q-max", "9", "--claims", "all", "--format", "text", "--no-header"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().last().unwrap().ends_with("0 failed"));
}
