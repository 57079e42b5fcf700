//! End-to-end tests of the schemekit binary: output shapes and the exit
//! code contract (0 success, 1 validation, 2 parse/IO, 3 not applicable or
//! cap, 4 disagreement).

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures")).join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schemekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f.flush().unwrap();
    f
}

#[test]
fn validate_pentagon() {
    let out = run(&["validate", fixture("order05-no02.rm").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "OK order=5 d=2 k=[1,2,2]");
}

#[test]
fn validate_tensor_document() {
    let path = fixture("order05-no02.tensor.json");
    let out = run(&["validate", path.to_str().unwrap(), "--format", "tensor"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("OK order=5"));
    // autodetection picks tensor format from the leading brace
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn validate_truncated_file_is_a_parse_error() {
    let f = temp_file("3\n0 1 2\n");
    let out = run(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn validate_missing_file_is_io_error() {
    let out = run(&["validate", "/nonexistent/scheme.rm"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn validate_tampered_tensor_is_a_validation_error() {
    let text = std::fs::read_to_string(fixture("order05-no02.tensor.json")).unwrap();
    // bump one intersection number: breaks the row-sum identity
    let tampered = text.replacen("[2,0,1]", "[2,1,1]", 1);
    assert_ne!(text, tampered);
    let f = temp_file(&tampered);
    let out = run(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn info_shows_structure() {
    let out = run(&["info", fixture("order06-no06.rm").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("thin_radical={0,1}"));
    assert!(text.contains("thin_residue={0,1}"));
    assert!(text.contains("min_singular={0,1}"));
    assert!(text.contains("quasi_thin=true"));
    assert!(text.contains("p=2: S_p'={0,1} closure={0,1}"));
}

#[test]
fn info_on_trivial_scheme() {
    let f = temp_file("1\n0\n");
    let out = run(&["info", f.path().to_str().unwrap(), "--primes", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("thin_radical={0}"));
    assert!(text.contains("thin_residue={0}"));
    assert!(text.contains("min_singular={0}"));
}

#[test]
fn info_residue_of_valency_four_scheme_is_everything() {
    let out = run(&["info", fixture("order06-no02.rm").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("thin_residue={0,1,2}"));
}

#[test]
fn transitive_verdicts_and_exit_codes() {
    let out = run(&[
        "transitive",
        fixture("order06-no05.rm").to_str().unwrap(),
        "--prime",
        "2",
        "--method",
        "both",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "transitive (agree)");

    let out = run(&[
        "transitive",
        fixture("order06-no02.rm").to_str().unwrap(),
        "--prime",
        "2",
        "--method",
        "structural",
    ]);
    assert_eq!(code(&out), 3);

    let out = run(&[
        "transitive",
        fixture("order06-no06.rm").to_str().unwrap(),
        "--prime",
        "2",
        "--method",
        "oracle",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "not transitive");
}

#[test]
fn transitive_rejects_composite_prime() {
    let out = run(&[
        "transitive",
        fixture("order05-no02.rm").to_str().unwrap(),
        "--prime",
        "4",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn singular_enumeration_output() {
    let out = run(&["singular", fixture("order06-no06.rm").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        vec![
            "{0,1}  closed",
            "{0,1,2}  not-closed",
            "{0,1,3}  not-closed",
            "{0,1,2,3}  closed",
            "4 singular subsets",
        ]
    );
}

#[test]
fn singular_cap_exceeded() {
    let out = run(&[
        "singular",
        fixture("order06-no06.rm").to_str().unwrap(),
        "--max-free",
        "1",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn batch_full_catalog_agrees() {
    let out = run(&[
        "batch",
        fixture("catalog.rm").to_str().unwrap(),
        "--primes",
        "2",
        "--format",
        "structured",
    ]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = parsed.as_array().unwrap();
    assert_eq!(records.len(), 31);
    for r in records {
        assert_ne!(r["methods_agree"], serde_json::Value::Bool(false));
        assert!(r.get("error").is_none());
    }
    // entry order mirrors catalog order
    assert_eq!(records[0]["id"], "order01-no01");
    assert_eq!(records[30]["id"], "order10-cyclic-pm");
}

#[test]
fn batch_empty_catalog() {
    let f = temp_file("");
    let out = run(&[
        "batch",
        f.path().to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "[]");
}

#[test]
fn batch_with_corrupted_block_continues() {
    let good = std::fs::read_to_string(fixture("order05-no02.rm")).unwrap();
    let body = good
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    let catalog = format!("# ok\n{body}\n# broken\n3\n0 1\n# ok2\n{body}\n");
    let f = temp_file(&catalog);
    let out = run(&[
        "batch",
        f.path().to_str().unwrap(),
        "--primes",
        "2",
        "--format",
        "structured",
    ]);
    assert_eq!(code(&out), 1);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = parsed.as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert!(records[1]["error"].as_str().unwrap().contains("parse error"));
    assert_eq!(records[2]["id"], "ok2");
}

#[test]
fn batch_flags_non_scheme_blocks() {
    // a partition of 4 points whose triple counts are inconsistent
    let catalog = "# not-a-scheme\n4\n0122\n1012\n2101\n2210\n";
    let f = temp_file(catalog);
    let out = run(&[
        "batch",
        f.path().to_str().unwrap(),
        "--primes",
        "2",
        "--format",
        "structured",
    ]);
    assert_eq!(code(&out), 1);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = parsed.as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert!(records[0]["error"]
        .as_str()
        .unwrap()
        .contains("not an association scheme"));
}

#[test]
fn batch_text_format_renders_table() {
    let out = run(&[
        "batch",
        fixture("catalog.rm").to_str().unwrap(),
        "--primes",
        "2,3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("id"));
    assert!(text.contains("order05-no02"));
    // one header plus one row per (scheme, prime)
    assert_eq!(text.lines().count(), 1 + 31 * 2);
}

#[test]
fn batch_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = run(&[
        "batch",
        fixture("catalog.rm").to_str().unwrap(),
        "--primes",
        "2",
        "--format",
        "structured",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with('['));
}
