use std::path::Path;
use std::process::Command;

use serde_json::Value;

use fquasi::cayley::TableFile;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_fquasi"))
        .args(args)
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    let json: Value = serde_json::from_str(&text)
        .unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    (out.status.code().expect("exit code"), json)
}

fn corpus_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let (code, json) = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{json}");
    dir
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn check_group_is_f() {
    let dir = corpus_dir();
    let (code, json) = run(&["check", &path(dir.path(), "z5.tbl"), "--f", "--loop", "--nk"]);
    assert_eq!(code, 0);
    assert_eq!(json["pass"], true);
}

#[test]
fn check_cml81_moufang_nk() {
    let dir = corpus_dir();
    let (code, json) = run(&["check", &path(dir.path(), "cml81.tbl"), "--moufang", "--nk", "--f"]);
    assert_eq!(code, 1, "CML81 is not an F-quasigroup: {json}");
    let checks = json["checks"].as_array().unwrap();
    let row = |n: &str| checks.iter().find(|r| r["name"] == n).unwrap()["pass"].clone();
    assert_eq!(row("moufang"), true);
    assert_eq!(row("nk_loop"), true);
    assert_eq!(row("f_quasigroup"), false);
}

#[test]
fn cml81_lemmas_need_slow_tier() {
    let dir = corpus_dir();
    let cml = path(dir.path(), "cml81.tbl");
    let (code, json) = run(&["check", &cml, "--lemmas"]);
    assert_eq!(code, 2);
    assert_eq!(json["error"], "SearchTooLarge");
    let (code, json) = run(&["check", &path(dir.path(), "s3.tbl"), "--lemmas"]);
    assert_eq!(code, 0, "{json}");
}

#[test]
fn check_broken_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.tbl");
    std::fs::write(&p, "3\n0 1 2\n1 1 0\n2 0 1\n").unwrap();
    let (code, json) = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(json["error"], "NotLatin");
}

#[test]
fn missing_file_and_bad_usage_are_json() {
    let (code, json) = run(&["check", "/nonexistent/x.tbl"]);
    assert_eq!(code, 2);
    assert_eq!(json["error"], "Io");
    let (code, json) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert_eq!(json["error"], "Usage");
}

#[test]
fn analyze_examples() {
    let dir = corpus_dir();
    let (code, json) = run(&["analyze", &path(dir.path(), "s3.tbl")]);
    assert_eq!(code, 0);
    assert_eq!(json["loop"]["nucleus"]["size"], 6);
    assert_eq!(json["loop"]["moufang_center"]["size"], 1);
    assert_eq!(json["loop"]["center"]["size"], 1);
    assert_eq!(json["m_set"].as_array().unwrap().len(), 1);

    let (_, json) = run(&["analyze", &path(dir.path(), "z4.tbl")]);
    for key in ["nucleus", "moufang_center", "center"] {
        assert_eq!(json["loop"][key]["size"], 4);
    }
    assert_eq!(json["m_set"].as_array().unwrap().len(), 4);
    assert_eq!(json["loop"]["endomorphisms"], 4);

    let (_, json) = run(&["analyze", &path(dir.path(), "cml81.tbl")]);
    assert_eq!(json["loop"]["moufang_center"]["size"], 81);
    assert_eq!(json["loop"]["nucleus"]["members"], json["loop"]["center"]["members"]);
}

#[test]
fn rho_then_sigma() {
    let dir = corpus_dir();
    let module = dir.path().join("z5.mod");
    let (code, json) = run(&[
        "rho",
        &path(dir.path(), "z5-2x3y.tbl"),
        "--point",
        "0",
        "--out",
        module.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{json}");
    assert_eq!(json["verified"], true);
    let text = std::fs::read_to_string(&module).unwrap();
    assert!(text.contains("phi: 0 1 2 3 4\n"));
    assert!(text.contains("psi: 0 2 4 1 3\n"));
    assert!(text.contains("mu: 0 2 4 1 3\n"));
    assert!(text.contains("nu: 0 1 2 3 4\n"));
    assert!(text.ends_with("point 0\n"));

    let back = dir.path().join("back.tbl");
    let (code, _) = run(&["sigma", module.to_str().unwrap(), "-o", back.to_str().unwrap()]);
    assert_eq!(code, 0);
    let original = TableFile::parse(&std::fs::read_to_string(dir.path().join("z5-2x3y.tbl")).unwrap()).unwrap();
    let rebuilt = TableFile::parse(&std::fs::read_to_string(&back).unwrap()).unwrap();
    assert_eq!(rebuilt.table, original.table);
    assert_eq!(rebuilt.point, original.point);
}

#[test]
fn roundtrip_whole_corpus() {
    let dir = corpus_dir();
    let (code, json) = run(&["roundtrip", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{json}");
    assert_eq!(json["summary"]["all_pass"], true);
    assert_eq!(json["summary"]["failed"], 0);
    // the order-12 Moufang loop and CML81 are not F-quasigroups
    assert_eq!(json["summary"]["skipped"], 2);
}

#[test]
fn search_counts_and_tier_gate() {
    let (code, json) = run(&["search", "3", "--kind", "all"]);
    assert_eq!(code, 0);
    assert_eq!(json["count"], 12);
    let (code, json) = run(&["search", "5"]);
    assert_eq!(code, 2);
    assert_eq!(json["error"], "SearchTooLarge");
    let (code, json) = run(&["--tier", "slow", "--jobs", "2", "search", "5", "--kind", "loops"]);
    assert_eq!(code, 0);
    // 56 loops with neutral element 0, and as many for each other neutral
    assert_eq!(json["count"], 56 * 5);
}

#[test]
fn jobs_do_not_change_output() {
    let (_, one) = run(&["--jobs", "1", "search", "4", "--tables"]);
    let (_, four) = run(&["--jobs", "4", "search", "4", "--tables"]);
    assert_eq!(one, four);
}
