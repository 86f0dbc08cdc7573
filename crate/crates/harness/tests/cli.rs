use std::fs;
use std::process::Command;

fn upbo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_upbo"))
}

#[test]
fn eval_and_list() {
    let out = upbo().args(["eval", "F9", "0", "0"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0");
    let out = upbo().args(["eval", "F5", "3.141592653589793", "3.141592653589793"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim().parse::<f64>().unwrap(), -1.0);
    let out = upbo().args(["list"]).output().unwrap();
    let listing = String::from_utf8(out.stdout).unwrap();
    assert!(listing.contains("Select2SolsChooseOneBetween") && listing.contains("GetWeightedMeanOfElites"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[campaign]\noptimizers=[\"UPBO\"]\n").unwrap();
    assert_eq!(upbo().args(["run", bad.to_str().unwrap()]).status().unwrap().code(), Some(1));
    assert_eq!(upbo().args(["eval", "F99", "1"]).status().unwrap().code(), Some(1));
    assert_eq!(upbo().args(["report", dir.path().join("none").to_str().unwrap()]).status().unwrap().code(), Some(1));
}

#[test]
fn run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.toml");
    fs::write(
        &plan,
        "[campaign]\noptimizers=[\"UPBO\",\"PSO\"]\nfunctions=[\"F2\",\"F12\"]\nnfe=[30000]\ntrials=2\nout=\"unused\"\n",
    )
    .unwrap();
    let out_dir = dir.path().join("res");
    let status = upbo()
        .args(["run", plan.to_str().unwrap(), "--nfe", "800", "--dim", "2", "--trials", "2", "--parallelism", "2"])
        .args(["--seed", "5", "--out", out_dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    for f in ["results.csv", "errors.csv", "errors.txt", "ranks.txt", "ttest.txt", "failed.csv"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let results = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 1 + 2 * 2 * 2);
    assert!(results.lines().skip(1).all(|l| l.contains(",800,")));

    let out = upbo().args(["report", out_dir.to_str().unwrap(), "--reference"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Total Score"));
    assert!(text.contains("CLPSO*"));
    assert!(out_dir.join("reference.txt").exists());
}
