//! Integration tests of the command line binary: exit codes, file artifacts,
//! and byte determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ewsolve"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn short_single_config(dir: &Path) -> std::path::PathBuf {
    write_config(
        dir,
        "short.cfg",
        "# short benchmark run\nproblem=single\nT=1\nreport_every=0.5\nsnapshots=1\nout_diag=diag.csv\nout_snap=snap.csv\n",
    )
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_single_config(dir.path());
    let out = bin().arg("run").arg(&cfg).current_dir(dir.path()).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let diag = std::fs::read_to_string(dir.path().join("diag.csv")).unwrap();
    let mut lines = diag.lines();
    assert_eq!(lines.next().unwrap(), "t,I1,I2,I3,L2,Linf,I1rel,I2rel,I3rel");
    assert_eq!(diag.lines().count(), 4); // header + t = 0, 0.5, 1

    let snap = std::fs::read_to_string(dir.path().join("snap_t1.csv")).unwrap();
    assert!(snap.starts_with("x,U\n"));
    assert_eq!(snap.lines().count(), 1 + 5 * 1000 + 1);

    let text = stdout_of(&out);
    assert!(text.contains("Linfx1e3"), "summary table missing:\n{text}");
    assert!(text.contains("boundary slopes"), "slope report missing:\n{text}");
}

#[test]
fn runs_are_byte_identical() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let cfg = short_single_config(d.path());
        let out = bin().arg("run").arg(&cfg).current_dir(d.path()).output().unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(d1.path().join("diag.csv")).unwrap();
    let b = std::fs::read(d2.path().join("diag.csv")).unwrap();
    assert_eq!(a, b);
    let a = std::fs::read(d1.path().join("snap_t1.csv")).unwrap();
    let b = std::fs::read(d2.path().join("snap_t1.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();

    let bad_key = write_config(dir.path(), "bad_key.cfg", "problem=single\nwhat=3\n");
    let out = bin().arg("run").arg(&bad_key).current_dir(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 2"), "missing line number: {err}");
    assert!(err.contains("unknown key"), "{err}");

    let bad_value = write_config(dir.path(), "bad_value.cfg", "problem=single\ndt=soon\n");
    let out = bin().arg("run").arg(&bad_value).current_dir(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("non-numeric"));

    let unknown = write_config(dir.path(), "unknown.cfg", "problem=tsunami\n");
    let out = bin().arg("run").arg(&unknown).current_dir(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().arg("run").arg(dir.path().join("missing.cfg")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("cannot read"));
}

#[test]
fn numerical_failure_exits_with_code_3_and_leaves_trailer() {
    let dir = tempfile::tempdir().unwrap();
    // Amplitude far past the blow-up limit with a vanishing step: the first
    // update is near-identity, so the out-of-range state trips the guard.
    let cfg = write_config(
        dir.path(),
        "blowup.cfg",
        "problem=single\nc=700000\nT=1e-8\ndt=1e-9\nreport_every=1e-8\nout_diag=diag.csv\n",
    );
    let out = bin().arg("run").arg(&cfg).current_dir(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("blew up"));
    let diag = std::fs::read_to_string(dir.path().join("diag.csv")).unwrap();
    assert!(diag.lines().next().unwrap().starts_with("t,I1"));
    assert!(diag.lines().last().unwrap().starts_with("# error:"), "{diag}");
}

#[test]
fn stability_scan_writes_per_angle_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["stability", "--ubar", "0.3", "--grid", "512", "--out", "amp.csv"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("coupled modes="), "{text}");

    let csv = std::fs::read_to_string(dir.path().join("amp.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "phi,xi_row1,xi_row2");
    assert_eq!(lines.len(), 1 + 512);
    assert!(lines[1].starts_with("0,"), "{}", lines[1]);
}

#[test]
fn stability_rejects_bad_flags() {
    let out = bin().args(["stability", "--roots", "uniform"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3)); // domain error from the root family
    let out = bin().args(["stability", "--grid", "8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_runs_all_configs_and_reports_worst_failure() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), "good.cfg", "problem=single\nT=0.5\nreport_every=0.5\n");
    let bad = write_config(dir.path(), "bad.cfg", "problem=single\ndt=soon\n");
    let out = bin()
        .arg("sweep")
        .arg(&good)
        .arg(&bad)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = stdout_of(&out);
    assert!(text.contains("good.cfg: ok"), "{text}");
    assert!(text.contains("bad.cfg: FAILED"), "{text}");
    // Default outputs take the config stem, so parallel runs cannot clobber
    // one another.
    assert!(dir.path().join("good_diag.csv").exists());
}

#[test]
fn sweep_of_two_good_configs_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let one = write_config(dir.path(), "one.cfg", "problem=single\nT=0.5\nreport_every=0.5\n");
    let two = write_config(dir.path(), "two.cfg", "problem=maxwellian\nT=0.5\ndt=0.025\nreport_every=0.5\n");
    let out = bin().arg("sweep").arg(&one).arg(&two).current_dir(dir.path()).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(dir.path().join("one_diag.csv").exists());
    assert!(dir.path().join("two_diag.csv").exists());
}
