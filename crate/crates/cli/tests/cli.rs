use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn loopcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopcat")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const Z9: &str = "loop 9\n0 1 2 3 4 5 6 7 8\n1 2 3 4 5 6 7 8 0\n2 3 4 5 6 7 8 0 1\n3 4 5 6 7 8 0 1 2\n4 5 6 7 8 0 1 2 3\n5 6 7 8 0 1 2 3 4\n6 7 8 0 1 2 3 4 5\n7 8 0 1 2 3 4 5 6\n8 0 1 2 3 4 5 6 7\n";

#[test]
fn check_accepts_z9_as_bruck() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z9.txt");
    fs::write(&file, Z9).unwrap();
    let o = loopcat(&["check", "--variety", "bruck", p(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("left Bruck: yes"));
    assert_eq!(loopcat(&["check", "--variety", "ca", p(&file)]).status.code(), Some(0));
}

#[test]
fn check_fails_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s3.txt");
    fs::write(&file, "loop 6\n0 1 2 3 4 5\n1 2 0 5 3 4\n2 0 1 4 5 3\n3 4 5 0 1 2\n4 5 3 2 0 1\n5 3 4 1 2 0\n").unwrap();
    assert_eq!(loopcat(&["check", "--variety", "ca", p(&file)]).status.code(), Some(2));
    fs::write(&file, "loop 2\n0 1\n0 1\n").unwrap();
    assert_eq!(loopcat(&["check", "--variety", "bruck", p(&file)]).status.code(), Some(2));
}

#[test]
fn enumerate_convert_iso_and_catalog_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b27");
    let o = loopcat(&["enumerate", "--variety", "bruck", "--prime", "3", "--exponent", "3", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = fs::read_to_string(out.join("manifest.tsv")).unwrap();
    assert_eq!(manifest.lines().filter(|l| !l.starts_with('#')).count(), 7);

    let list = loopcat(&["catalog", "list", p(&out)]);
    assert!(stdout(&list).starts_with("bruck of order 27 over GF(3), 7 entries"));
    assert_eq!(loopcat(&["catalog", "verify", p(&out)]).status.code(), Some(0));
    assert_eq!(loopcat(&["catalog", "diff", p(&out), p(&out)]).status.code(), Some(0));

    let again = loopcat(&["enumerate", "--variety", "bruck", "--prime", "3", "--exponent", "3", "--out", p(&out)]);
    assert_eq!(again.status.code(), Some(2));
    let resumed = loopcat(&["enumerate", "--variety", "bruck", "--prime", "3", "--exponent", "3", "--out", p(&out), "--resume"]);
    assert_eq!(resumed.status.code(), Some(0));
    assert_eq!(loopcat(&["resume", p(&out)]).status.code(), Some(0));

    for e in 1..=7 {
        let bruck = out.join(format!("{e:06}.txt"));
        let quandle = dir.path().join("q.txt");
        let back = dir.path().join("b.txt");
        assert!(loopcat(&["convert", "--to", "quandle", "--out", p(&quandle), p(&bruck)]).status.success());
        assert!(fs::read_to_string(&quandle).unwrap().starts_with("quandle 27\n"));
        assert!(loopcat(&["convert", "--to", "bruck", "--out", p(&back), p(&quandle)]).status.success());
        assert_eq!(fs::read(&back).unwrap(), fs::read(&bruck).unwrap());

        let gamma = dir.path().join("g.txt");
        assert!(loopcat(&["convert", "--to", "gamma", "--out", p(&gamma), p(&bruck)]).status.success());
        assert_eq!(loopcat(&["check", "--variety", "ca", p(&gamma)]).status.code(), Some(0));
    }

    let a = out.join("000001.txt");
    let b = out.join("000002.txt");
    let same = loopcat(&["iso", p(&a), p(&a)]);
    assert_eq!(same.status.code(), Some(0));
    assert!(stdout(&same).starts_with("isomorphic\n0 "));
    assert_eq!(loopcat(&["iso", p(&a), p(&b)]).status.code(), Some(2));
}

#[test]
fn extend_reports_z9_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z9.txt");
    fs::write(&file, Z9).unwrap();
    let out = dir.path().join("ext");
    let o = loopcat(&["extend", "--variety", "bruck", "--prime", "3", "--out", p(&out), p(&file)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "dim B 7\ndim C 8\norbits 2\nextensions 2\n");
    assert!(out.join("000002.txt").exists());
}

#[test]
fn refusal_exits_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c9");
    let o = loopcat(&["enumerate", "--variety", "ca", "--prime", "3", "--exponent", "2", "--coset-limit", "1", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("refused factor 1"));
    let manifest = fs::read_to_string(out.join("manifest.tsv")).unwrap();
    assert!(manifest.contains("#refused 1 "));
}

#[test]
fn corrupted_catalog_exits_with_status_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b9");
    assert!(loopcat(&["enumerate", "--variety", "bruck", "--prime", "3", "--exponent", "2", "--out", p(&out)]).status.success());
    let manifest = out.join("manifest.tsv");
    let text = fs::read_to_string(&manifest).unwrap().replace("\t1\t", "\t2\t");
    fs::write(&manifest, text).unwrap();
    assert_eq!(loopcat(&["catalog", "verify", p(&out)]).status.code(), Some(3));
}

#[test]
fn bad_arguments_exit_with_status_2() {
    assert_eq!(loopcat(&["enumerate", "--variety", "bruck"]).status.code(), Some(2));
    assert_eq!(loopcat(&["catalog", "list", "/nonexistent"]).status.code(), Some(2));
}
