use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str], file: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doublecd")).args(args).arg(fixture(file)).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    assert_eq!(run(&["check"], "hyp.pres").status.code(), Some(0));
    assert_eq!(run(&["check"], "zero.pres").status.code(), Some(0));
    assert_eq!(run(&["check"], "xx.pres").status.code(), Some(0));
    let bad = run(&["check"], "bad.pres");
    assert_eq!(bad.status.code(), Some(1));
    let out = stdout(&bad);
    assert!(out.contains("[FAIL] CD.c:generators (CD.c) witness: (x, x)"), "{}", out);
}

#[test]
fn flags_override_options() {
    let a = stdout(&run(&["check", "--samples", "4", "--seed", "9"], "hyp.pres"));
    let b = stdout(&run(&["check", "--samples", "8", "--seed", "9"], "hyp.pres"));
    assert_ne!(a, b);
    let paper = run(&["check", "--convention", "paper"], "xx.pres");
    assert_eq!(paper.status.code(), Some(0));
}

#[test]
fn rep_prints_a_table() {
    let o = run(&["rep", "--N", "2"], "xx.pres");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("table:\n"));
    assert!(out.contains("bracket(x_11, x_12) = "), "{}", out);
    assert_eq!(run(&["rep", "--N", "1"], "zero.pres").status.code(), Some(0));
    assert_eq!(run(&["rep", "--N", "7"], "zero.pres").status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["check"], "missing.pres").status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], "hyp.pres").status.code(), Some(2));
}

#[test]
fn json_output_parses() {
    let o = run(&["check", "--json"], "bad.pres");
    let out = stdout(&o);
    assert!(out.trim_start().starts_with('{'));
    assert!(out.contains("\"report\""));
    assert!(out.contains("\"status\": \"fail\""));
}

#[test]
fn convert_is_reversible() {
    let o = run(&["convert"], "hyp.pres");
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("doublecd-bin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hyp-dpva.pres");
    std::fs::write(&path, &o.stdout).unwrap();
    let back = Command::new(env!("CARGO_BIN_EXE_doublecd")).arg("convert").arg(&path).output().unwrap();
    assert_eq!(back.status.code(), Some(0));
    let rt = Command::new(env!("CARGO_BIN_EXE_doublecd")).arg("roundtrip").arg(&path).output().unwrap();
    assert_eq!(rt.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
    let original = std::fs::read_to_string(fixture("hyp.pres")).unwrap();
    let text = stdout(&back);
    for line in ["u, v = 1 ox 1", "v, u = 1 ox 1", "x = u"] {
        assert!(original.contains(line) && text.contains(line), "{}", text);
    }
}
