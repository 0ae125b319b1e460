//! Run orchestration: build the problem, time-step it, record diagnostics
//! rows and snapshots, and write deterministic CSV files.
//!
//! Diagnostics CSV: header `t,I1,I2,I3,L2,Linf,I1rel,I2rel,I3rel`, one row
//! per report time (L2/Linf empty without an exact solution), values with 10
//! significant digits. Snapshot CSV: header `x,U`, five samples per element
//! plus the right endpoint. When a run fails mid-way the partial diagnostics
//! file is still written, ending in a `# error: ...` trailer line.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::basis::build_tables;
use crate::config::{validate, ReportTimes, RunConfig};
use crate::diagnostics::{drifts, error_norms, invariants, DiagnosticsRow, Drift};
use crate::mesh::build_mesh;
use crate::numfmt::fmt_sig;
use crate::problems;
use crate::stepper::{initialize, RunState};
use crate::{Error, Result};

/// Everything a finished run produced.
#[derive(Debug)]
pub struct RunArtifacts {
    pub rows: Vec<DiagnosticsRow>,
    pub drifts: Vec<[Drift; 3]>,
    pub state: RunState,
    pub diag_path: PathBuf,
    pub snapshot_paths: Vec<PathBuf>,
}

fn report_steps(cfg: &RunConfig, total: u64) -> BTreeSet<u64> {
    let mut steps = BTreeSet::new();
    steps.insert(0);
    match &cfg.report {
        ReportTimes::Every(r) => {
            let mut k = 1u64;
            loop {
                let s = (k as f64 * r / cfg.dt).round() as u64;
                if s > total {
                    break;
                }
                steps.insert(s);
                k += 1;
            }
        }
        ReportTimes::At(times) => {
            for &t in times {
                let s = ((t / cfg.dt).round() as u64).min(total);
                steps.insert(s);
            }
        }
    }
    steps
}

fn snapshot_steps(cfg: &RunConfig, total: u64) -> BTreeSet<u64> {
    cfg.snapshots
        .iter()
        .map(|&t| ((t / cfg.dt).round() as u64).min(total))
        .collect()
}

fn diag_path(cfg: &RunConfig) -> PathBuf {
    match &cfg.out_diag {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(format!("{}_diag.csv", cfg.problem)),
    }
}

fn snapshot_path(cfg: &RunConfig, t: f64) -> PathBuf {
    let base = match &cfg.out_snap {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(format!("{}_snap.csv", cfg.problem)),
    };
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("snap");
    let tag = format!("{stem}_t{}.csv", fmt_sig(t, 10));
    base.with_file_name(tag)
}

fn opt_field(v: Option<f64>) -> String {
    v.map(|x| fmt_sig(x, 10)).unwrap_or_default()
}

fn write_diag_file(
    path: &Path,
    rows: &[DiagnosticsRow],
    row_drifts: &[[Drift; 3]],
    trailer: Option<&str>,
) -> Result<()> {
    let mut out = String::from("t,I1,I2,I3,L2,Linf,I1rel,I2rel,I3rel\n");
    for (row, d) in rows.iter().zip(row_drifts) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt_sig(row.t, 10),
            fmt_sig(row.i1, 10),
            fmt_sig(row.i2, 10),
            fmt_sig(row.i3, 10),
            opt_field(row.l2),
            opt_field(row.linf),
            fmt_sig(d[0].value, 10),
            fmt_sig(d[1].value, 10),
            fmt_sig(d[2].value, 10),
        ));
    }
    if let Some(first) = row_drifts.first() {
        for (i, d) in first.iter().enumerate() {
            if d.is_absolute {
                out.push_str(&format!(
                    "# I{}rel is the absolute change: the baseline is below {:e}\n",
                    i + 1,
                    crate::diagnostics::ABS_DRIFT_FLOOR
                ));
            }
        }
    }
    if let Some(msg) = trailer {
        out.push_str(&format!("# error: {msg}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_snapshot_file(path: &Path, state: &RunState) -> Result<()> {
    let mesh = &state.mesh;
    let mut out = String::from("x,U\n");
    let mut push = |x: f64| -> Result<()> {
        let (u, _, _) = state.evaluate(x)?;
        out.push_str(&format!("{},{}\n", fmt_sig(x, 10), fmt_sig(u, 10)));
        Ok(())
    };
    for e in 0..mesh.n_elems {
        for q in 0..5 {
            push(mesh.nodes[e] + q as f64 * mesh.h / 5.0)?;
        }
    }
    push(mesh.b)?;
    std::fs::write(path, out)?;
    Ok(())
}

fn make_row(state: &RunState, exact: Option<&(dyn Fn(f64, f64) -> f64 + Send + Sync)>) -> DiagnosticsRow {
    let (i1, i2, i3) = invariants(state);
    let (l2, linf) = match exact {
        Some(f) => {
            let (l2, linf) = error_norms(state, &f);
            (Some(l2), Some(linf))
        }
        None => (None, None),
    };
    DiagnosticsRow { t: state.t(), i1, i2, i3, l2, linf }
}

fn print_summary(log: &mut dyn Write, rows: &[DiagnosticsRow], state: &RunState) -> Result<()> {
    writeln!(
        log,
        "{:>10}  {:>14}  {:>14}  {:>14}  {:>12}  {:>12}",
        "t", "I1", "I2", "I3", "L2x1e3", "Linfx1e3"
    )?;
    for row in rows {
        let l2 = row.l2.map(|v| fmt_sig(v * 1e3, 10)).unwrap_or_else(|| "-".into());
        let linf = row.linf.map(|v| fmt_sig(v * 1e3, 10)).unwrap_or_else(|| "-".into());
        writeln!(
            log,
            "{:>10}  {:>14}  {:>14}  {:>14}  {:>12}  {:>12}",
            fmt_sig(row.t, 10),
            fmt_sig(row.i1, 10),
            fmt_sig(row.i2, 10),
            fmt_sig(row.i3, 10),
            l2,
            linf
        )?;
    }
    let (sl, sr) = state.boundary_slopes();
    writeln!(
        log,
        "boundary slopes at t={}: left={}, right={}",
        fmt_sig(state.t(), 10),
        fmt_sig(sl, 10),
        fmt_sig(sr, 10)
    )?;
    Ok(())
}

/// Execute one configured run: time-step to T, write the diagnostics CSV and
/// any snapshots, print a summary table to `log`, and return the artifacts.
///
/// On a numerical failure the partial diagnostics file is written with an
/// error trailer before the error is returned.
pub fn execute(cfg: &RunConfig, log: &mut dyn Write) -> Result<RunArtifacts> {
    validate(cfg)?;
    let problem = problems::build(cfg)?;
    let mesh = build_mesh(cfg.a, cfg.b, cfg.n_elems)?;
    let tables = build_tables(cfg.roots, mesh.h)?;
    let mut state = initialize(mesh, tables, &*problem.u0, problem.bc, cfg.dt, cfg.mu)?;

    let total = (cfg.t_final / cfg.dt).round() as u64;
    let reports = report_steps(cfg, total);
    let snaps = snapshot_steps(cfg, total);
    let dpath = diag_path(cfg);

    let mut rows: Vec<DiagnosticsRow> = Vec::new();
    let mut snapshot_paths: Vec<PathBuf> = Vec::new();

    let exact = problem.exact.as_deref();
    let record = |state: &RunState, rows: &mut Vec<DiagnosticsRow>| {
        rows.push(make_row(state, exact));
    };

    if reports.contains(&0) {
        record(&state, &mut rows);
    }
    if snaps.contains(&0) {
        let p = snapshot_path(cfg, 0.0);
        write_snapshot_file(&p, &state)?;
        snapshot_paths.push(p);
    }

    for s in 1..=total {
        if let Err(e) = state.step() {
            let d = drifts(&rows);
            write_diag_file(&dpath, &rows, &d, Some(&e.to_string()))?;
            writeln!(log, "run failed at t={}: {e}", fmt_sig(s as f64 * cfg.dt, 10))?;
            return Err(e);
        }
        if reports.contains(&s) {
            record(&state, &mut rows);
        }
        if snaps.contains(&s) {
            let p = snapshot_path(cfg, state.t());
            write_snapshot_file(&p, &state)?;
            snapshot_paths.push(p);
        }
    }

    let row_drifts = drifts(&rows);
    write_diag_file(&dpath, &rows, &row_drifts, None)?;
    print_summary(log, &rows, &state)?;
    writeln!(log, "wrote {}", dpath.display())?;
    for p in &snapshot_paths {
        writeln!(log, "wrote {}", p.display())?;
    }

    Ok(RunArtifacts { rows, drifts: row_drifts, state, diag_path: dpath, snapshot_paths })
}

/// Flags of the `stability` subcommand.
pub struct StabilityJob {
    pub ubar: f64,
    pub uprime: f64,
    pub dt: f64,
    pub h: f64,
    pub mu: f64,
    pub grid: usize,
    pub roots: crate::basis::RootFamily,
    pub out: PathBuf,
}

/// Run an amplification scan, write the per-angle CSV
/// (`phi,xi_row1,xi_row2`), and print the row maxima and the coupled-mode
/// maximum.
pub fn execute_stability(job: &StabilityJob, log: &mut dyn Write) -> Result<()> {
    let tables = build_tables(job.roots, job.h)?;
    let scan = crate::stability::scan(&tables, job.ubar, job.uprime, job.dt, job.mu, job.grid)?;
    let coupled =
        crate::stability::coupled_max(&tables, job.ubar, job.uprime, job.dt, job.mu, job.grid)?;
    let mut out = String::from("phi,xi_row1,xi_row2\n");
    for k in 0..scan.angles.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_sig(scan.angles[k], 10),
            fmt_sig(scan.row1[k], 10),
            fmt_sig(scan.row2[k], 10)
        ));
    }
    std::fs::write(&job.out, out)?;
    writeln!(
        log,
        "max |amplification|: row1={}, row2={}, coupled modes={}",
        fmt_sig(scan.max_row1, 10),
        fmt_sig(scan.max_row2, 10),
        fmt_sig(coupled, 10)
    )?;
    writeln!(log, "wrote {}", job.out.display())?;
    Ok(())
}

/// Run several configs concurrently, each in its own thread with isolated
/// output files (default outputs are prefixed by the config file stem).
/// Returns per-config results in input order.
pub fn execute_sweep(paths: &[PathBuf]) -> Vec<(PathBuf, Result<RunArtifacts>, Vec<u8>)> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = paths
            .iter()
            .map(|path| {
                scope.spawn(move || {
                    let mut log: Vec<u8> = Vec::new();
                    let result = run_one_sweep_entry(path, &mut log);
                    (path.clone(), result, log)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep thread panicked")).collect()
    })
}

fn run_one_sweep_entry(path: &Path, log: &mut dyn Write) -> Result<RunArtifacts> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = crate::config::parse_config(&text)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("run").to_string();
    if cfg.out_diag.is_none() {
        cfg.out_diag = Some(format!("{stem}_diag.csv"));
    }
    if cfg.out_snap.is_none() {
        cfg.out_snap = Some(format!("{stem}_snap.csv"));
    }
    execute(&cfg, log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_run;

    fn short_single(dir: &Path) -> RunConfig {
        let mut cfg = default_run("single").unwrap();
        cfg.t_final = 1.0;
        cfg.report = ReportTimes::Every(0.5);
        cfg.snapshots = vec![1.0];
        cfg.out_diag = Some(dir.join("d.csv").to_string_lossy().into_owned());
        cfg.out_snap = Some(dir.join("s.csv").to_string_lossy().into_owned());
        cfg
    }

    #[test]
    fn run_writes_expected_rows_and_snapshots() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = short_single(dir.path());
        let mut log = Vec::new();
        let art = execute(&cfg, &mut log).unwrap();
        assert_eq!(art.rows.len(), 3);
        assert_eq!(art.rows[0].t, 0.0);
        assert_eq!(art.rows[1].t, 0.5);
        assert_eq!(art.rows[2].t, 1.0);
        assert!(art.rows[0].l2.is_some());

        let diag = std::fs::read_to_string(&art.diag_path).unwrap();
        let mut lines = diag.lines();
        assert_eq!(lines.next().unwrap(), "t,I1,I2,I3,L2,Linf,I1rel,I2rel,I3rel");
        assert_eq!(diag.lines().count(), 4);
        let first = diag.lines().nth(1).unwrap();
        assert!(first.starts_with("0,"), "{first}");

        assert_eq!(art.snapshot_paths.len(), 1);
        let snap = std::fs::read_to_string(&art.snapshot_paths[0]).unwrap();
        let lines: Vec<&str> = snap.lines().collect();
        assert_eq!(lines[0], "x,U");
        assert_eq!(lines.len(), 1 + 5 * 1000 + 1);
        // x strictly increasing, covering the whole interval.
        let xs: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
        assert_eq!(xs[0], 0.0);
        assert_eq!(*xs.last().unwrap(), 30.0);
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn runs_are_byte_deterministic() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let mut log = Vec::new();
        let a1 = execute(&short_single(d1.path()), &mut log).unwrap();
        let a2 = execute(&short_single(d2.path()), &mut log).unwrap();
        let b1 = std::fs::read(&a1.diag_path).unwrap();
        let b2 = std::fs::read(&a2.diag_path).unwrap();
        assert_eq!(b1, b2);
        let s1 = std::fs::read(&a1.snapshot_paths[0]).unwrap();
        let s2 = std::fs::read(&a2.snapshot_paths[0]).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn failed_run_leaves_partial_file_with_trailer() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = default_run("single").unwrap();
        // An amplitude past the blow-up limit trips the check on step one.
        cfg.c = vec![7e5];
        cfg.t_final = 1.0;
        cfg.dt = 0.5;
        cfg.report = ReportTimes::Every(0.5);
        cfg.out_diag = Some(dir.path().join("d.csv").to_string_lossy().into_owned());
        let mut log = Vec::new();
        let err = execute(&cfg, &mut log).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let diag = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
        assert!(diag.lines().last().unwrap().starts_with("# error:"), "{diag}");
    }

    #[test]
    fn report_steps_snap_to_step_times() {
        let mut cfg = default_run("single").unwrap();
        cfg.t_final = 1.0;
        cfg.report = ReportTimes::At(vec![0.26, 0.74]);
        let steps = report_steps(&cfg, 20);
        // 0.26/0.05 = 5.2 -> step 5; 0.74/0.05 = 14.8 -> step 15.
        assert_eq!(steps.into_iter().collect::<Vec<_>>(), vec![0, 5, 15]);
    }

    #[test]
    fn snapshot_paths_carry_the_time_tag() {
        let cfg = default_run("collision").unwrap();
        assert_eq!(snapshot_path(&cfg, 15.0), PathBuf::from("collision_snap_t15.csv"));
        assert_eq!(snapshot_path(&cfg, 0.5), PathBuf::from("collision_snap_t0.5.csv"));
    }
}
