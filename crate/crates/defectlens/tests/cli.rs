mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_defectlens"));
    c.env_remove("DEFECTLENS_OUT");
    c
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        cmd,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write_config(fx: &common::FixtureRepo, out: &Path, extra: &str) -> PathBuf {
    let path = fx.path().join("run.toml");
    let text = format!(
        "out = {out:?}\nseed = 7\n{extra}\n[[project]]\nname = \"bank\"\nrepo = \"repo\"\nissues = \"issues.ndjson\"\n",
        out = out.display().to_string()
    );
    std::fs::write(&path, text).unwrap();
    path
}

/// Every file under `root` with its bytes, keyed by relative path.
fn tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = walkdir::WalkDir::new(root)
        .into_iter()
        .map(Result::unwrap)
        .filter(|e| e.file_type().is_file())
        .map(|e| {
            (
                e.path().strip_prefix(root).unwrap().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

const SMALL: &str = "repeats = 3\n[forest]\nn_trees = 20";

#[test]
fn full_run_is_reproducible_and_matches_goldens() {
    let fx = common::build();
    let start = Instant::now();
    let out_a = fx.path().join("out-a");
    let out_b = fx.path().join("out-b");
    let cfg = write_config(&fx, &out_a, "");
    run(bin().arg("--config").arg(&cfg).arg("run"));
    run(bin().arg("--config").arg(&cfg).arg("--out").arg(&out_b).arg("run"));
    assert!(start.elapsed().as_secs() < 30, "{:?}", start.elapsed());

    let a = tree(&out_a);
    assert_eq!(a, tree(&out_b));
    let names: Vec<&str> = a.iter().map(|f| f.0.as_str()).collect();
    for want in [
        "bank/mine/windows.csv",
        "bank/mine/release-0/labels.csv",
        "bank/metrics/release-2/metrics.csv",
        "bank/dataset/dataset.csv",
        "bank/evaluate/LOC/scores.csv",
        "bank/evaluate/CK+OTHER/scores.csv",
        "bank/importance/vif.csv",
        "bank/importance/importance.csv",
        "report/report.md",
        "report/tests.csv",
        "report/figures/ranks.svg",
    ] {
        assert!(names.contains(&want), "{want} missing from {names:?}");
    }
    let golden = |name: &str| std::fs::read_to_string(common::fixtures().join(name)).unwrap();
    let read = |name: &str| std::fs::read_to_string(out_a.join(name)).unwrap();
    assert_eq!(read("bank/dataset/assembled.csv"), golden("golden_assembled.csv"));
    assert_eq!(read("bank/dataset/dataset.csv"), golden("golden_dataset.csv"));

    // Deleting intermediates and rerunning restores them byte for byte.
    std::fs::remove_dir_all(out_a.join("bank/dataset")).unwrap();
    std::fs::remove_dir_all(out_a.join("report")).unwrap();
    run(bin().arg("--config").arg(&cfg).arg("run"));
    assert_eq!(tree(&out_a), a);
}

#[test]
fn staged_commands_match_the_run_command() {
    let fx = common::build();
    let staged = fx.path().join("staged");
    let whole = fx.path().join("whole");
    let cfg = write_config(&fx, &staged, SMALL);
    let repo = fx.repo_path();
    let c = |args: &[&str]| {
        let mut cmd = bin();
        cmd.arg("--config").arg(&cfg).args(args);
        run(&mut cmd)
    };
    c(&["mine", repo.to_str().unwrap(), "--project", "bank", "--issues", fx.issues_path().to_str().unwrap()]);
    c(&["metrics", repo.to_str().unwrap(), "--project", "bank", "--all-releases"]);
    c(&["dataset", "bank"]);
    let dataset = staged.join("bank/dataset/dataset.csv");
    for suite in ["LOC", "CK", "OTHER", "CK+OTHER"] {
        c(&["evaluate", dataset.to_str().unwrap(), "--suite", suite]);
    }
    c(&["importance", dataset.to_str().unwrap()]);
    c(&["report", staged.to_str().unwrap()]);
    c(&["--out", whole.to_str().unwrap(), "run"]);
    let strip = |t: Vec<(String, Vec<u8>)>| -> Vec<(String, Vec<u8>)> {
        t.into_iter().filter(|f| !f.0.ends_with("diagnostics.txt")).collect()
    };
    assert_eq!(strip(tree(&staged)), strip(tree(&whole)));
}

#[test]
fn evaluate_loc_suite_uses_only_loc() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("project,release,fqn,LOC,WMC,DIT,NOC,CBO,RFC,LCOM5,NPA,NPM,NLE,CBOI,CD,defective\n");
    for i in 0..40 {
        // LOC decides the label; CBO decides it the opposite way.
        let loc = if i % 2 == 0 { 10 + i } else { 200 + i };
        let cbo = if i % 2 == 0 { 9 } else { 1 };
        text += &format!("p,0,C{i},{loc},1,0,0,{cbo},1,1,0,1,0,0,0.000000,{}\n", i % 2);
    }
    let ds = dir.path().join("d.csv");
    std::fs::write(&ds, text).unwrap();
    let out = dir.path().join("o");
    run(bin().arg("--out").arg(&out).args(["evaluate", ds.to_str().unwrap(), "--suite", "loc"]));
    let scores = std::fs::read_to_string(out.join("p/evaluate/LOC/scores.csv")).unwrap();
    let rows: Vec<&str> = scores.lines().skip(1).collect();
    assert_eq!(rows.len(), 30);
    assert!(rows.iter().all(|r| r.starts_with("p,LOC,")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |cmd: &mut Command| cmd.output().unwrap().status.code();
    assert_eq!(code(bin().arg("--version")), Some(0));
    assert_eq!(code(bin().arg("frobnicate")), Some(1));
    assert_eq!(code(bin().args(["evaluate", "x.csv", "--suite", "XYZ"])), Some(1));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "k = 1\n").unwrap();
    assert_eq!(code(bin().arg("--config").arg(&bad).arg("run")), Some(1));
    assert_eq!(code(bin().arg("run")), Some(1));
    let missing = dir.path().join("nope.csv");
    assert_eq!(code(bin().arg("evaluate").arg(&missing).args(["--suite", "CK"])), Some(2));
    assert_eq!(code(bin().arg("report").arg(dir.path())), Some(2));
    let malformed = dir.path().join("m.csv");
    std::fs::write(&malformed, "project,release\n").unwrap();
    assert_eq!(code(bin().arg("importance").arg(&malformed)), Some(2));
    assert_eq!(code(bin().arg("--out").arg(dir.path()).arg("dataset").arg("ghost")), Some(2));
}

#[test]
fn output_root_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("project,release,fqn,LOC,WMC,DIT,NOC,CBO,RFC,LCOM5,NPA,NPM,NLE,CBOI,CD,defective\n");
    for i in 0..12 {
        text += &format!("q,0,C{i},{},1,0,0,0,1,1,0,1,0,0,0.000000,{}\n", 10 + i, i % 2);
    }
    let ds = dir.path().join("d.csv");
    std::fs::write(&ds, text).unwrap();
    let env_out = dir.path().join("env");
    run(bin()
        .env("DEFECTLENS_OUT", &env_out)
        .args(["evaluate", ds.to_str().unwrap(), "--suite", "LOC"]));
    assert!(env_out.join("q/evaluate/LOC/scores.csv").exists());
}
