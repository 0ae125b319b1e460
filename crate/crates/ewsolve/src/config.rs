//! Run configuration: per-problem defaults, the key=value config dialect,
//! and its emitter. `parse_config(emit_config(cfg))` reproduces `cfg` exactly.
//!
//! Config files hold one `key=value` per line; `#` starts a comment. The
//! `problem` key is required and selects the defaults; every other key
//! overrides one field. List values are comma-separated.

use crate::basis::RootFamily;
use crate::{Error, Result};

/// When diagnostics rows are recorded: every r time units, or at an explicit
/// list of times. Requested times snap to the nearest step time, which is at
/// most half a step away. A baseline row at t = 0 is always recorded.
#[derive(Clone, Debug, PartialEq)]
pub enum ReportTimes {
    Every(f64),
    At(Vec<f64>),
}

/// A fully specified run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub a: f64,
    pub b: f64,
    pub n_elems: usize,
    pub dt: f64,
    pub t_final: f64,
    pub mu: f64,
    pub roots: RootFamily,
    /// Wave speeds (one per wave; amplitude is 3c).
    pub c: Vec<f64>,
    /// Wave centers, or the step center for the bore.
    pub x0: Vec<f64>,
    /// Bore inflow level U₀.
    pub u0_amp: f64,
    /// Bore step width d.
    pub d: f64,
    pub report: ReportTimes,
    /// Times at which to write profile snapshots.
    pub snapshots: Vec<f64>,
    /// Diagnostics CSV path; default `<problem>_diag.csv`.
    pub out_diag: Option<String>,
    /// Snapshot CSV base path; default `<problem>_snap.csv`.
    pub out_snap: Option<String>,
}

/// The default run of a named problem, using the benchmark parameters.
pub fn default_run(name: &str) -> Result<RunConfig> {
    let base = |problem: &str| RunConfig {
        problem: problem.to_string(),
        a: 0.0,
        b: 30.0,
        n_elems: 1000,
        dt: 0.05,
        t_final: 80.0,
        mu: 1.0,
        roots: RootFamily::Legendre,
        c: vec![0.1],
        x0: vec![10.0],
        u0_amp: 0.1,
        d: 2.0,
        report: ReportTimes::Every(10.0),
        snapshots: Vec::new(),
        out_diag: None,
        out_snap: None,
    };
    match name {
        "single" => Ok(base("single")),
        "two_waves" => Ok(RunConfig {
            b: 80.0,
            n_elems: 800,
            dt: 0.01,
            t_final: 30.0,
            c: vec![1.5, 0.75],
            x0: vec![10.0, 25.0],
            report: ReportTimes::At(vec![1.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]),
            ..base("two_waves")
        }),
        "three_waves" => Ok(RunConfig {
            b: 100.0,
            n_elems: 1000,
            dt: 0.1,
            t_final: 15.0,
            c: vec![4.5, 1.5, 0.5],
            x0: vec![10.0, 25.0, 35.0],
            report: ReportTimes::Every(3.0),
            ..base("three_waves")
        }),
        "maxwellian" => Ok(RunConfig {
            b: 50.0,
            n_elems: 1000,
            dt: 0.025,
            t_final: 12.0,
            mu: 0.1,
            c: Vec::new(),
            x0: Vec::new(),
            report: ReportTimes::Every(3.0),
            ..base("maxwellian")
        }),
        "bore" => Ok(RunConfig {
            a: -20.0,
            b: 50.0,
            n_elems: 1000,
            dt: 0.05,
            t_final: 800.0,
            mu: 0.16666667,
            c: Vec::new(),
            x0: vec![0.0],
            report: ReportTimes::Every(100.0),
            ..base("bore")
        }),
        "collision" => Ok(RunConfig {
            a: -40.0,
            b: 40.0,
            n_elems: 800,
            dt: 0.1,
            t_final: 100.0,
            c: vec![-1.2, 1.2],
            x0: vec![-20.0, 20.0],
            report: ReportTimes::Every(5.0),
            snapshots: vec![0.0, 15.0, 50.0, 100.0],
            ..base("collision")
        }),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    value.trim().parse().map_err(|_| Error::Config {
        line,
        msg: format!("non-numeric value {value:?} for key {key}"),
    })
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize> {
    value.trim().parse().map_err(|_| Error::Config {
        line,
        msg: format!("non-numeric value {value:?} for key {key}"),
    })
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>> {
    let v = value.trim();
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|part| parse_f64(line, key, part)).collect()
}

/// Parse a config text. The `problem` key selects defaults; remaining keys
/// override fields. Errors carry 1-based line numbers.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut pairs: Vec<(usize, &str, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let bare = raw.split('#').next().unwrap_or("").trim();
        if bare.is_empty() {
            continue;
        }
        let (key, value) = bare.split_once('=').ok_or_else(|| Error::Config {
            line,
            msg: format!("expected key=value, got {bare:?}"),
        })?;
        pairs.push((line, key.trim(), value.trim()));
    }

    let problem = pairs
        .iter()
        .find(|(_, k, _)| *k == "problem")
        .map(|(_, _, v)| v.to_string())
        .ok_or_else(|| Error::ConfigInvalid("missing required key: problem".into()))?;
    let mut cfg = default_run(&problem)?;

    for (line, key, value) in pairs {
        match key {
            "problem" => {
                if value != cfg.problem {
                    return Err(Error::Config {
                        line,
                        msg: format!("problem redefined from {:?} to {value:?}", cfg.problem),
                    });
                }
            }
            "a" => cfg.a = parse_f64(line, key, value)?,
            "b" => cfg.b = parse_f64(line, key, value)?,
            "N" => cfg.n_elems = parse_usize(line, key, value)?,
            "dt" => cfg.dt = parse_f64(line, key, value)?,
            "T" => cfg.t_final = parse_f64(line, key, value)?,
            "mu" => cfg.mu = parse_f64(line, key, value)?,
            "roots" => {
                cfg.roots = value.parse().map_err(|_| Error::Config {
                    line,
                    msg: format!("bad value {value:?} for key roots (legendre or chebyshev)"),
                })?
            }
            "c" => cfg.c = parse_list(line, key, value)?,
            "x0" => cfg.x0 = parse_list(line, key, value)?,
            "U0" => cfg.u0_amp = parse_f64(line, key, value)?,
            "d" => cfg.d = parse_f64(line, key, value)?,
            "report_every" => cfg.report = ReportTimes::Every(parse_f64(line, key, value)?),
            "report_at" => cfg.report = ReportTimes::At(parse_list(line, key, value)?),
            "snapshots" => cfg.snapshots = parse_list(line, key, value)?,
            "out_diag" => cfg.out_diag = Some(value.to_string()),
            "out_snap" => cfg.out_snap = Some(value.to_string()),
            other => {
                return Err(Error::Config { line, msg: format!("unknown key {other:?}") });
            }
        }
    }
    validate(&cfg)?;
    Ok(cfg)
}

/// Check the cross-field invariants of a config.
pub fn validate(cfg: &RunConfig) -> Result<()> {
    let fail = |msg: String| Err(Error::ConfigInvalid(msg));
    if !(cfg.b > cfg.a) {
        return fail(format!("interval [{}, {}] is empty", cfg.a, cfg.b));
    }
    if cfg.n_elems < 2 {
        return fail(format!("N={} is too small, need at least 2 elements", cfg.n_elems));
    }
    if !(cfg.dt > 0.0) {
        return fail(format!("dt={} must be positive", cfg.dt));
    }
    if !(cfg.mu > 0.0) {
        return fail(format!("mu={} must be positive", cfg.mu));
    }
    if !(cfg.t_final > 0.0) {
        return fail(format!("T={} must be positive", cfg.t_final));
    }
    let ratio = cfg.t_final / cfg.dt;
    let steps = ratio.round();
    if steps < 1.0 || (ratio - steps).abs() > 1e-6 * steps.max(1.0) {
        return fail(format!(
            "final time T={} is not a whole number of steps of dt={}",
            cfg.t_final, cfg.dt
        ));
    }
    let horizon = cfg.t_final + 0.5 * cfg.dt;
    match &cfg.report {
        ReportTimes::Every(r) => {
            if !(*r > 0.0) {
                return fail(format!("report_every={r} must be positive"));
            }
        }
        ReportTimes::At(times) => {
            for &t in times {
                if !(0.0..=horizon).contains(&t) {
                    return fail(format!("report time {t} outside [0, T]"));
                }
            }
        }
    }
    for &t in &cfg.snapshots {
        if !(0.0..=horizon).contains(&t) {
            return fail(format!("snapshot time {t} outside [0, T]"));
        }
    }
    if cfg.c.len() != cfg.x0.len() && !matches!(cfg.problem.as_str(), "bore" | "maxwellian") {
        return fail(format!(
            "c has {} entries but x0 has {}",
            cfg.c.len(),
            cfg.x0.len()
        ));
    }
    Ok(())
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Emit a config text that parses back to exactly the same config. Floats use
/// the shortest representation that round-trips.
pub fn emit_config(cfg: &RunConfig) -> String {
    let mut s = String::new();
    let mut push = |k: &str, v: String| {
        s.push_str(k);
        s.push('=');
        s.push_str(&v);
        s.push('\n');
    };
    push("problem", cfg.problem.clone());
    push("a", cfg.a.to_string());
    push("b", cfg.b.to_string());
    push("N", cfg.n_elems.to_string());
    push("dt", cfg.dt.to_string());
    push("T", cfg.t_final.to_string());
    push("mu", cfg.mu.to_string());
    push("roots", cfg.roots.to_string());
    push("c", join(&cfg.c));
    push("x0", join(&cfg.x0));
    push("U0", cfg.u0_amp.to_string());
    push("d", cfg.d.to_string());
    match &cfg.report {
        ReportTimes::Every(r) => push("report_every", r.to_string()),
        ReportTimes::At(times) => push("report_at", join(times)),
    }
    push("snapshots", join(&cfg.snapshots));
    if let Some(p) = &cfg.out_diag {
        push("out_diag", p.clone());
    }
    if let Some(p) = &cfg.out_snap {
        push("out_snap", p.clone());
    }
    s
}
