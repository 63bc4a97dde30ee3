use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use latticeforge::Presentation;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latticeforge"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn present_ff_example_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["present", "ff", "--p", "5", "--e", "1", "--places", "2,3,4", "--out", "P.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = Presentation::from_json(&fs::read_to_string(dir.path().join("P.json")).unwrap()).unwrap();
    assert_eq!(p.num_generators(), 18);
    assert_eq!(p.squares.len(), 27);
    assert_eq!(code(&run(dir.path(), &["validate", "--in", "P.json"])), 0);
    assert_eq!(code(&run(dir.path(), &["link", "--in", "P.json"])), 0);
}

#[test]
fn hurwitz_quotient_and_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["present", "hurwitz", "--primes", "5", "--out", "h5.json"])), 0);
    let o = run(dir.path(), &["quotient", "--in", "h5.json", "--mod", "11", "--out", "c.bin"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(dir.path(), &["spectrum", "--in", "c.bin", "--tol", "1e-9", "--json", "r.json"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(r["vertices"], 660);
    assert_eq!(r["pass"], true);
}

#[test]
fn failing_link_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["cyclic", "--sizes", "4,6", "--out", "C.json"])), 0);
    let mut p = Presentation::from_json(&fs::read_to_string(dir.path().join("C.json")).unwrap()).unwrap();
    p.squares.pop();
    fs::write(dir.path().join("broken.json"), p.to_json()).unwrap();
    assert_eq!(code(&run(dir.path(), &["double", "--in", "broken.json", "--out", "D.json"])), 1);
    assert!(!dir.path().join("D.json").exists());
    assert_eq!(code(&run(dir.path(), &["validate", "--in", "broken.json"])), 1);
    let o = run(dir.path(), &["link", "--in", "broken.json"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("covered 0 times"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&run(dir.path(), &["present", "ff", "--p", "5"])), 2);
    assert_eq!(code(&run(dir.path(), &["present", "ff", "--p", "6", "--places", "1"])), 2);
    assert_eq!(code(&run(dir.path(), &["validate", "--in", "missing.json"])), 2);
    assert_eq!(code(&run(dir.path(), &["cyclic", "--sizes", "3"])), 2);
    assert_eq!(code(&run(dir.path(), &["present", "hurwitz", "--primes", "5", "--out", "h.json"])), 0);
    // a modulus inside S and a modulus of the wrong kind
    assert_eq!(code(&run(dir.path(), &["quotient", "--in", "h.json", "--mod", "5", "--out", "x.bin"])), 2);
    assert_eq!(code(&run(dir.path(), &["quotient", "--in", "h.json", "--mod-poly", "t^2+1", "--out", "x.bin"])), 2);
    let o = bin().current_dir(dir.path()).env("LATTICEFORGE_THREADS", "none").args(["cyclic", "--sizes", "2"]).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn delta_override() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["present", "ff", "--p", "5", "--places", "2,3,4", "--delta", "2+Z"]);
    let b = run(dir.path(), &["present", "ff", "--p", "5", "--places", "2,3,4", "--delta", "2,1"]);
    let c = run(dir.path(), &["present", "ff", "--p", "5", "--places", "2,3,4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let d = run(dir.path(), &["present", "ff", "--p", "5", "--places", "2,3,4", "--delta", "1+2Z"]);
    assert_eq!(code(&d), 0);
    assert_ne!(a.stdout, d.stdout);
    assert_eq!(code(&run(dir.path(), &["present", "ff", "--p", "5", "--places", "2", "--delta", "1,1"])), 2);
}

fn pipeline(dir: &Path, threads: &str) {
    let steps: &[&[&str]] = &[
        &["present", "ff", "--p", "3", "--places", "1,2", "--out", "P.json"],
        &["present", "ff", "--p", "5", "--places", "2,3,4", "--lambda", "--out", "L.json"],
        &["present", "hurwitz", "--primes", "3,5,7", "--out", "H.json"],
        &["double", "--in", "P.json", "--out", "D.json"],
        &["quotient", "--in", "P.json", "--mod-poly", "t^2+1", "--out", "C.bin", "--dot", "C.dot"],
        &["spectrum", "--in", "C.bin", "--csv", "S.csv", "--json", "S.json"],
    ];
    for args in steps {
        let o = bin().current_dir(dir).env("LATTICEFORGE_THREADS", threads).args(*args).output().unwrap();
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn pipeline_is_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    pipeline(a.path(), "1");
    pipeline(b.path(), "4");
    for f in ["P.json", "L.json", "H.json", "D.json", "C.bin", "C.dot", "S.csv", "S.json"] {
        let (x, y) = (fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
        assert!(!x.is_empty(), "{f} is empty");
        assert_eq!(x, y, "{f} differs between runs");
    }
}
