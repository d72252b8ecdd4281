use std::path::PathBuf;
use std::process::{Command, Output};

use hypglue::{decimal, pi_multiple, Node, Report};
use num_bigint::BigInt;
use num_rational::BigRational;

fn hypglue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypglue")).args(args).output().expect("run hypglue")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypglue-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn analyze_reports_the_face_numbers() {
    let o = hypglue(&["analyze", "builtin:kerckhoff_storm"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with(&format!("tool: hypglue {}\n", env!("CARGO_PKG_VERSION"))));
    assert!(out.contains("  f-vector: (44, 120, 100, 24)\n"));
    assert!(out.contains("    pi/2: 88\n    pi/3: 12\n"));
    assert!(out.contains("  volume: (4/3)*pi^2\n"));
}

#[test]
fn glue_check_passes_for_m() {
    let o = hypglue(&["glue", "builtin:manifold_M", "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("    chi: 1\n"));
    assert!(out.contains("    orientable: no\n"));
    assert!(out.contains("      component 0: c0.f2:E, c0.f5:E, c0.f8:E, c0.f11:E, c0.f14:E, c0.f17:E\n"));
    assert!(out.ends_with("  verdict: pass\n"));
}

#[test]
fn failed_verification_exits_one() {
    let text = "name lonely\ncopies 1 of builtin:kerckhoff_storm\n";
    let p = scratch("lonely.schema", text);
    let o = hypglue(&["glue", p.to_str().unwrap(), "--check"]);
    if o.status.code() == Some(2) {
        panic!("schema text rejected: {}", stderr(&o));
    }
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("  verdict: FAIL\n"));
}

#[test]
fn invariants_of_the_fixtures() {
    let a = fixture("form_24cell.txt");
    let b = fixture("form_P.txt");
    let o = hypglue(&["invariants", &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("    ramification: {}\n"));
    assert!(out.contains("    ramification: {2, 5}\n"));
    assert!(out.contains(&format!("    {a} ~ {b}: incommensurable\n")));
    let o = hypglue(&["invariants", "--convention", "even-clifford", &a]);
    assert!(stdout(&o).contains("    ramification: {2, inf}\n"));
}

#[test]
fn input_errors_exit_two_with_positions() {
    let p = scratch("bad_form.txt", "# header\nform 1, 2, x\n");
    let o = hypglue(&["invariants", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2: bad rational 'x'"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());

    let p = scratch("bad.poly", "dim 4\nnormal 1, 0, 0\n");
    let o = hypglue(&["analyze", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2:"));

    assert_eq!(hypglue(&["analyze", "builtin:nope"]).status.code(), Some(2));
    assert_eq!(hypglue(&["analyze", "/definitely/missing"]).status.code(), Some(2));
    assert_eq!(hypglue(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn polytope_files_are_read() {
    let text = "dim 2\nnormal 0, 1, 0\nlabel a\nnormal 0, 0, 1\nlabel b\nnormal 1, -1, -1\nlabel c\n";
    let p = scratch("corner.poly", text);
    let o = hypglue(&["analyze", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("  name: corner\n"));
}

#[test]
fn output_flag_and_json_like() {
    let dir = std::env::temp_dir().join(format!("hypglue-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let o = hypglue(&["--json-like", "--output", path.to_str().unwrap(), "builtin", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("{\n  \"tool\": "));
    assert!(text.contains("\"manifold_M\": \"builtin:manifold_M\""));
    assert!(text.ends_with("}\n"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [&["glue", "builtin:double_N", "--check"][..], &["cover", "builtin:cut_N_split"][..]] {
        let a = hypglue(args);
        let b = hypglue(args);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn double_output_parses_back() {
    let o = hypglue(&["double", "builtin:manifold_M"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("  closed: yes\n"));
    assert!(out.contains("  chi: 2\n"));
    let start = out.find("  text: |\n").unwrap() + "  text: |\n".len();
    let body: String = out[start..].lines().map(|l| format!("{}\n", l.strip_prefix("    ").unwrap_or(l))).collect();
    let s = gluing::parse_schema(&body, |r| gluing::resolve_cell(r, None)).unwrap();
    assert_eq!(s.copy_count(), 2);
    assert!(s.is_closed());
}

#[test]
fn boundary_comparison_fails_on_mismatch() {
    let o = hypglue(&["boundary", "builtin:cut_N_split", "--isomorphic-to", "builtin:gieseking"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("  isomorphic: no\n"));
}

#[test]
fn digests_identify_inputs() {
    let r = Report::new("x", &[("a".into(), b"abc".to_vec())]);
    assert_eq!(
        r.value("inputs/a"),
        Some("sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad")
    );
    let s = Report::new("x", &[("a".into(), b"abd".to_vec())]);
    assert_ne!(r.value("digest"), s.value("digest"));
}

#[test]
fn tree_rendering() {
    let mut r = Report::new("t", &[]);
    let mut n = Node::branch("s");
    n.add("k", "v");
    n.add("multi", "one\ntwo");
    n.push(Node::branch("empty"));
    r.section(n);
    let text = r.to_text();
    assert!(text.ends_with("s:\n  k: v\n  multi: |\n    one\n    two\n  empty:\n"));
    let json = r.to_json_like();
    assert!(json.contains("\"s\": {\n    \"k\": \"v\",\n    \"multi\": \"one\\ntwo\",\n    \"empty\": {}\n  }"));
}

#[test]
fn number_formatting() {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    assert_eq!(decimal(&q(1, 3), 5), "0.33333");
    assert_eq!(decimal(&q(-7, 4), 3), "-1.750");
    assert_eq!(decimal(&q(1, 200), 2), "0.00");
    assert_eq!(pi_multiple(&q(4, 3), 2), "(4/3)*pi^2");
    assert_eq!(pi_multiple(&q(2, 1), 1), "2*pi");
    assert_eq!(pi_multiple(&q(1, 1), 1), "pi");
}
