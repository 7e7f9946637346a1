use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn subspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn gabidulin_positional_and_flags_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let o1 = subspace(&["construct", "gabidulin", "8", "4", "3", "--out", path(&a)]);
    let o2 = subspace(&["construct", "gabidulin", "--v", "8", "--k", "4", "--delta", "3", "--out", path(&b)]);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o2.status.code(), Some(0));
    assert!(stdout(&o1).starts_with("M=256 d=6\n"));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.starts_with("v=8 q=2\n"));
    assert_eq!(text.lines().count(), 257);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("spread.txt");
    assert_eq!(subspace(&["construct", "spread", "--v", "4", "--out", path(&code)]).status.code(), Some(0));
    assert_eq!(subspace(&["verify", path(&code), "--d", "4", "--dims", "2"]).status.code(), Some(0));
    let bad = subspace(&["verify", path(&code), "--d", "5"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAILED"));
    assert_eq!(subspace(&["nonsense"]).status.code(), Some(2));
    assert_eq!(subspace(&["construct", "gabidulin", "8", "4"]).status.code(), Some(2));
    let missing = subspace(&["verify", "/nonexistent/code.txt", "--d", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent/code.txt"));
}

#[test]
fn ilp_solve_small() {
    let o = subspace(&["ilp", "solve", "--v", "4", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("optimum=5 status=optimal"));
    let c = subspace(&["ilp", "clique", "--v", "3", "--d", "2", "--json"]);
    let v: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["value"], 8);
    assert_eq!(v["status"], "optimal");
}

#[test]
fn lp_export_is_byte_stable_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.lp");
    let b = dir.path().join("b.lp");
    let run = |p: &Path, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_subspace"))
            .args(["ilp", "export", "--v", "5", "--d", "3", "--cuts", "ie_add", "--export", path(p)])
            .env("SUBSPACE_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run(&a, "1").status.code(), Some(0));
    assert_eq!(run(&b, "4").status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let o = subspace(&["ilp", "export", "--v", "4", "--d", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_table_csv() {
    let o = subspace(&["bounds", "table", "--csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,v,d,lower,upper,exact,types"));
    assert!(text.contains("\n2,6,3,108,117,false,\n"));
    assert!(text.contains("\n2,8,7,17,17,true,572\n"));
    assert_eq!(text.lines().count(), 37);
}

#[test]
fn group_commands() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("g.txt");
    std::fs::write(
        &gens,
        "v=6\n100000;010000;000100;001100;000001;000011\n010000;110000;001010;000101;001000;000100\n",
    )
    .unwrap();
    let o = subspace(&["group", "closure", path(&gens), "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 9);
    let f = subspace(&["group", "fixed", path(&gens), "--k", "2", "--json"]);
    let v: Value = serde_json::from_slice(&f.stdout).unwrap();
    assert_eq!(v["fixed"].as_array().unwrap().len(), 3);
}

#[test]
fn divis_commands() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("plane.txt");
    std::fs::write(&m, "0001 1\n0010 1\n0011 1\n0100 1\n0101 1\n0110 1\n0111 1\n").unwrap();
    let o = subspace(&["divis", "recognize", path(&m), "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0100;0010;0001"));
    assert_eq!(subspace(&["divis", "check", path(&m), "--r", "3"]).status.code(), Some(1));
    assert_eq!(subspace(&["divis", "theorem-check"]).status.code(), Some(0));

    let g = dir.path().join("g.txt");
    subspace(&["construct", "gabidulin", "8", "4", "3", "--out", path(&g)]);
    let text = std::fs::read_to_string(&g).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let removed = lines.remove(10).to_string();
    let cut = dir.path().join("cut.txt");
    std::fs::write(&cut, lines.join("\n") + "\n").unwrap();
    let o = subspace(&["divis", "lmrd-extend", path(&cut)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(&format!("completing solid: {removed}")));
    assert!(stdout(&o).contains("M=256 d=6"));
}
