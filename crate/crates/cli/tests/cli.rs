use std::fs;
use std::process::{Command, Output};

fn mertens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mertens"))
        .args(args)
        .arg("--quiet")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn doublesum_rows() {
    let out = mertens(&["doublesum", "--n", "3", "--method", "naive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,s,method\n3,2,naive\n");

    let out = mertens(&["doublesum", "--n", "500", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,s,method\n500,115,naive\n500,115,blocked\n");
}

#[test]
fn auto_method_switches_to_blocked() {
    let out = mertens(&["doublesum", "--n", "65"]);
    assert!(stdout(&out).ends_with(",blocked\n"));
    let out = mertens(&["doublesum", "--n", "64"]);
    assert!(stdout(&out).ends_with(",naive\n"));
}

#[test]
fn verify_default_bounds_pass() {
    let out = mertens(&["verify", "--meissel-max", "2000", "--bracket-max", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("suite,cases,status,counterexample\n"));
    assert_eq!(text.lines().count(), 10);
    assert!(!text.contains("FAIL"));
}

#[test]
fn scan_s_single_row() {
    let out = mertens(&["scan-s", "--n-min", "2", "--n-max", "2"]);
    assert_eq!(
        stdout(&out),
        "n,magnitude,exponent,running_sup\n2,1,0.000000,0.000000\n"
    );
}

#[test]
fn json_nulls() {
    let out = mertens(&["--format", "json", "scan-d", "--points", "1,10"]);
    assert_eq!(
        stdout(&out),
        "[\n{\"n\":1,\"magnitude\":1,\"exponent\":null,\"running_sup\":null},\n\
         {\"n\":10,\"magnitude\":3,\"exponent\":0.477121,\"running_sup\":0.477121}\n]\n"
    );
}

#[test]
fn mertens_points() {
    let out = mertens(&["mertens", "--points", "10,100,1000,10000"]);
    assert_eq!(stdout(&out), "x,m\n10,-1\n100,1\n1000,2\n10000,-23\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["scan-s", "--n-min", "1", "--n-max", "5"][..],
        &["mertens", "--points", "10,5"],
        &["mertens", "--points", "0"],
        &["doublesum", "--n", "0"],
        &["--threads", "0", "scan-s", "--n-min", "2", "--n-max", "3"],
        &["scan-s", "--n-min", "5", "--n-max", "4"],
        &["scan-d"],
        &["nonsense"],
    ] {
        assert_eq!(mertens(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn malformed_checkpoint_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ck");
    fs::write(&path, "100 1\nnot a record\n").unwrap();
    let out = mertens(&[
        "resume",
        "--x-max",
        "1000",
        "--checkpoint",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let missing = dir.path().join("missing.ck");
    let out = mertens(&[
        "resume",
        "--x-max",
        "1000",
        "--checkpoint",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn resume_matches_fresh_scan() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.ck");
    let ck = path.to_str().unwrap();

    let fresh = mertens(&["scan-d", "--x-max", "10000000"]);
    assert_eq!(fresh.status.code(), Some(0));

    let first = mertens(&["scan-d", "--x-max", "100000", "--checkpoint", ck]);
    assert_eq!(first.status.code(), Some(0));
    let before = fs::read_to_string(&path).unwrap();
    assert!(before.lines().any(|l| l == "100000\t-48"));

    let resumed = mertens(&["resume", "--x-max", "10000000", "--checkpoint", ck]);
    assert_eq!(resumed.status.code(), Some(0));
    assert_eq!(stdout(&resumed), stdout(&fresh));

    let after = fs::read_to_string(&path).unwrap();
    assert!(after.len() > before.len());
    assert!(after.lines().any(|l| l == "10000000\t1037"));
}

#[test]
fn output_file_and_thread_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_mertens"))
        .env("MERTENS_THREADS", "2")
        .args(["scan-s", "--n-min", "2", "--n-max", "40", "-q", "-o"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let single = mertens(&["--threads", "1", "scan-s", "--n-min", "2", "--n-max", "40"]);
    assert_eq!(fs::read(&path).unwrap(), single.stdout);
}
