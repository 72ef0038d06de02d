use std::path::PathBuf;
use std::process::{Command, Output};

fn write(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncconic")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const CONIC: &str = "field: Q\ngens: x y z\nrel: x*y + y*x\nrel: y*z + z*y\nrel: z*x + x*z\nrel: x^2\n";

#[test]
fn hilbert_of_a_conic() {
    let f = write("conic.alg", CONIC);
    let o = run(&["hilbert", "--max-deg", "4", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1,3,5,7,9");
}

#[test]
fn dual_prints_five_relations_that_parse_back() {
    let f = write("conic_dual.alg", CONIC);
    let o = run(&["dual", f.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("rel:")).count(), 5);
    // the dual of the dual has the original four relations
    let g = write("conic_dual_out.alg", &out);
    let back = stdout(&run(&["dual", g.to_str().unwrap()]));
    assert_eq!(back.lines().filter(|l| l.starts_with("rel:")).count(), 4);
}

#[test]
fn cmap_reports_the_class() {
    let f = write("conic_cmap.alg", CONIC);
    let o = run(&["cmap", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "class: U2V2-comm"));
}

#[test]
fn classify_skew_squares() {
    let f = write("e2.alg", "field: Q\ngens: x y\nrel: x*y - 2*y*x\nelem: x^2\nelem: y^2\n");
    let out = stdout(&run(&["classify", f.to_str().unwrap()]));
    assert!(out.contains("dim: 4"));
    assert!(out.contains("class: E-class lambda {2, 1/2}"));
}

#[test]
fn verify_a_table_exits_zero() {
    let o = run(&["verify", "--table", "10"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_single_row_verbose() {
    let o = run(&["verify", "--table", "A", "--row", "A2", "-v"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("ok   RZ z"));
    assert!(out.contains("ok   class: got M2"));
}

#[test]
fn parse_error_exits_two() {
    let f = write("bad.alg", "gens: x\nrel: x**\n");
    let o = run(&["hilbert", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn unknown_table_exits_two() {
    assert_eq!(run(&["verify", "--table", "99"]).status.code(), Some(2));
}
