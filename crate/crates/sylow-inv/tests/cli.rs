//! End-to-end exercises of the command-line surface: the verify report
//! schema and its byte-level determinism, the group dump format, and the
//! polynomial printer.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sylow-inv"))
}

#[test]
fn verify_single_target_report_schema() {
    let out = bin()
        .args([
            "verify", "--family", "sp", "--m", "2", "--q", "3", "--suites", "group,invariance",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is a JSON report");
    assert!(report["version"].is_string());
    assert!(report["config"]["suites"].is_array());
    assert!(report["results"].is_array());
    let summary = &report["summary"];
    assert_eq!(
        summary["total"].as_u64().unwrap(),
        report["results"].as_array().unwrap().len() as u64
    );
    assert_eq!(summary["failed"].as_u64().unwrap(), 0);
    for r in report["results"].as_array().unwrap() {
        assert!(r["id"].is_string());
        assert!(r["status"].is_string());
    }
}

#[test]
fn verify_reports_are_byte_identical() {
    let run = || {
        let out = bin()
            .args([
                "verify", "--family", "o-plus", "--m", "2", "--q", "2", "--suites",
                "group,certificates",
            ])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run(), "reports must be deterministic");
}

#[test]
fn verify_rejects_bad_config() {
    let out = bin()
        .args(["verify", "--family", "sp", "--m", "2"])
        .output()
        .expect("binary runs");
    assert!(!out.status.success());
    let out = bin()
        .args(["verify", "--family", "nope", "--m", "2", "--q", "2"])
        .output()
        .expect("binary runs");
    assert!(!out.status.success());
}

#[test]
fn group_dump_lists_generators() {
    let out = bin()
        .args(["group", "dump", "--family", "gu-even", "--m", "2", "--q", "2"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["family"], "gu-even");
    assert_eq!(v["order"], "64");
    assert_eq!(v["n"], 4);
    let gens = v["generators"].as_array().unwrap();
    assert!(!gens.is_empty());
    // each generator is an n x n matrix of digit vectors
    for g in gens {
        let rows = g.as_array().unwrap();
        assert_eq!(rows.len(), 4);
        for row in rows {
            assert_eq!(row.as_array().unwrap().len(), 4);
        }
    }
}

#[test]
fn poly_show_prints_display_and_machine_form() {
    let out = bin()
        .args([
            "poly", "show", "--kind", "omega", "--s", "1", "--j", "-1", "--n", "6", "--q", "2",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let display = lines.next().unwrap();
    assert!(display.contains("x1"));
    let machine: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    // six terms: three dual pairs in six variables
    assert_eq!(machine.as_array().unwrap().len(), 6);

    let out = bin()
        .args([
            "poly", "show", "--kind", "lambda", "--s", "1", "--lambda", "0", "--n", "8", "--q",
            "2",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let machine: serde_json::Value =
        serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(machine.as_array().unwrap().len(), 8);
}

#[test]
fn caps_env_var_shrinks_enumeration() {
    // a tiny enumeration cap turns the order-count check into a skip
    let out = bin()
        .env("SYLOW_INV_CAPS", "enum=4")
        .args(["verify", "--family", "sp", "--m", "2", "--q", "3", "--suites", "group"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["summary"]["skipped"].as_u64().unwrap() >= 1);
    let results = report["results"].as_array().unwrap();
    assert!(results.iter().any(|r| {
        r["id"].as_str().unwrap().starts_with("group/order-count") && r["status"] == "skipped"
    }));
}

#[test]
fn verify_writes_report_file() {
    let dir = std::env::temp_dir().join("sylow_inv_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = bin()
        .args([
            "verify", "--family", "o-odd", "--m", "2", "--q", "2", "--suites", "group", "--out",
        ])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let data = std::fs::read(&path).unwrap();
    let report: serde_json::Value = serde_json::from_slice(&data).unwrap();
    assert_eq!(report["summary"]["failed"].as_u64().unwrap(), 0);
    std::fs::remove_file(&path).ok();
}
