use serde_json::Value;
use std::process::{Command, Output};

fn ffpn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffpn"))
        .args(args)
        .env_remove("FFPN_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = ffpn(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_reports_failure_for_3_4() {
    let out = ffpn(&["check", "--q", "3", "--m", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("rhs = 384"));
    assert!(text.contains("verdict: fail"));
    let v = json(&["check", "--q", "3", "--m", "4"]);
    assert_eq!(v["rhs"], "384");
    assert_eq!(v["verdict"], "fail");
}

#[test]
fn table_one_json_rows() {
    let v = json(&["table", "--which", "1"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        assert!(row["report"]["delta"]["num"].is_string());
        assert!(row["report"]["lambda"]["den"].is_string());
        assert!(row["rhs_consistent"].is_boolean());
    }
    let text = stdout(&ffpn(&["table", "--which", "1"]));
    let header = text.lines().next().unwrap();
    let order = ["(q,m)", "d", "n", "g", "k", "Lambda", "q^{m/2}", "rhs"];
    let positions: Vec<usize> = order.iter().map(|h| header.find(h).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        vec!["table", "--which", "2", "--json"],
        vec!["sieve", "--q", "3", "--m", "18", "--d", "14", "--json"],
        vec!["resolve-pair", "--q", "3", "--m", "2", "--json"],
    ] {
        let out = stdout(&ffpn(&args));
        let parsed: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", out);
    }
}

#[test]
fn identical_requests_give_identical_bytes() {
    for args in [
        vec!["auto-sieve", "--q", "3", "--m", "18"],
        vec!["resolve-pair", "--q", "3", "--m", "3", "--json"],
        vec![
            "char-audit",
            "--q",
            "3",
            "--m",
            "2",
            "--quadratics",
            "5",
            "--seed",
            "9",
        ],
    ] {
        assert_eq!(ffpn(&args).stdout, ffpn(&args).stdout);
    }
}

#[test]
fn text_and_json_verdicts_agree() {
    for (q, m, d) in [("3", "18", "14"), ("9", "5", "2"), ("3", "4", "2")] {
        let text = stdout(&ffpn(&["sieve", "--q", q, "--m", m, "--d", d]));
        let v = json(&["sieve", "--q", q, "--m", m, "--d", d]);
        let verdict = v["verdict"].as_str().unwrap();
        assert!(text.contains(&format!("verdict: {verdict}")));
    }
}

#[test]
fn resolve_pair_3_2_reports_its_sweep() {
    let v = json(&["resolve-pair", "--q", "3", "--m", "2"]);
    assert_eq!(v["primitive_normal_count"], 4);
    assert_eq!(v["quadratics_checked"], 576);
    assert_eq!(v["status"], "exception_found");
    assert!(v.get("elapsed").is_none());
}

#[test]
fn checkpointed_resolution_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let cp = cp.to_str().unwrap();
    let partial = json(&[
        "resolve-pair",
        "--q",
        "3",
        "--m",
        "3",
        "--budget",
        "100",
        "--checkpoint",
        cp,
    ]);
    assert_eq!(partial["status"], "budget_exhausted");
    let resumed = json(&["resolve-pair", "--q", "3", "--m", "3", "--checkpoint", cp]);
    let fresh = json(&["resolve-pair", "--q", "3", "--m", "3"]);
    assert_eq!(resumed, fresh);
}

#[test]
fn witness_and_count_agree() {
    let w = json(&[
        "witness", "--q", "3", "--m", "3", "--a", "1", "--b", "0", "--c", "1",
    ]);
    assert!(w["alpha"]["coeffs"].is_string());
    let c = json(&[
        "count", "--q", "3", "--m", "3", "--a", "1", "--b", "0", "--c", "1",
    ]);
    assert!(c["count"].as_u64().unwrap() > 0);
    let none = json(&[
        "witness", "--q", "3", "--m", "3", "--a", "1", "--b", "1", "--c", "-1",
    ]);
    assert!(none["alpha"].is_null());
}

#[test]
fn exit_codes() {
    assert_eq!(ffpn(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        ffpn(&["check", "--q", "6", "--m", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ffpn(&["sieve", "--q", "3", "--m", "4", "--d", "7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ffpn(&["witness", "--q", "3", "--m", "2", "--a", "1", "--b", "1", "--c", "1"])
            .status
            .code(),
        Some(2),
        "b^2 = ac is rejected"
    );
    assert_eq!(
        ffpn(&["enumerate", "--q", "3", "--m", "20"]).status.code(),
        Some(3)
    );
}

#[test]
fn cache_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ffpn"))
            .args(["factor-int", "--q", "27", "--m", "26", "--json"])
            .env("FFPN_CACHE", &path)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(path.exists());
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["omega"], 12);
    assert_eq!(run().stdout, first.stdout);
}

#[test]
fn factor_poly_counts() {
    let v = json(&["factor-poly", "--q", "3", "--m", "8"]);
    assert_eq!(v["degrees"], serde_json::json!([1, 1, 2, 2, 2]));
    let v = json(&["factor-poly", "--q", "3", "--m", "6"]);
    assert_eq!(v["multiplicity"], 3);
}
