//! Run diagnostics: discrete error norms against an exact solution, the three
//! conserved integrals, their drifts, least-squares growth rates, and peak
//! location.

use crate::stepper::RunState;
use crate::{Error, Result};

/// 5-point Gauss-Legendre rule on [-1,1]; exact for polynomials through
/// degree 9, which covers every integrand below (degree <= 6 per element).
const GL5_X: [f64; 5] = [
    -0.906179845938664,
    -0.538469310105683,
    0.0,
    0.538469310105683,
    0.906179845938664,
];
const GL5_W: [f64; 5] = [
    0.236926885056189,
    0.478628670499366,
    0.568888888888889,
    0.478628670499366,
    0.236926885056189,
];

/// Discrete error norms over the interior and right-boundary nodes:
/// L2 = sqrt(h Σ e_j²), L∞ = max |e_j| for nodes j = 1..N.
pub fn error_norms(state: &RunState, exact: &dyn Fn(f64, f64) -> f64) -> (f64, f64) {
    let t = state.t();
    let mut sum = 0.0;
    let mut worst = 0.0f64;
    for j in 1..=state.mesh.n_elems {
        let e = state.coeffs.node_value(j) - exact(state.mesh.nodes[j], t);
        sum += e * e;
        worst = worst.max(e.abs());
    }
    ((state.mesh.h * sum).sqrt(), worst)
}

/// The three conserved integrals of the reconstruction:
/// I₁ = ∫U dx, I₂ = ∫(U² + μUₓ²) dx, I₃ = ∫U³ dx,
/// by per-element Gauss-Legendre quadrature (exact for the piecewise cubic).
pub fn invariants(state: &RunState) -> (f64, f64, f64) {
    let h = state.mesh.h;
    let mu = state.mu;
    // Local basis at the five quadrature points, shared by all elements.
    let pts: Vec<(crate::basis::LocalBasis, f64)> = (0..5)
        .map(|q| {
            let xi = 0.5 * (GL5_X[q] + 1.0);
            let w = 0.5 * GL5_W[q] * h;
            (crate::basis::eval_local(xi, h).expect("quadrature point inside element"), w)
        })
        .collect();
    let mut i1 = 0.0;
    let mut i2 = 0.0;
    let mut i3 = 0.0;
    for e in 0..state.mesh.n_elems {
        let win = state.coeffs.element_window(e);
        for (l, w) in &pts {
            let mut u = 0.0;
            let mut dxi = 0.0;
            for j in 0..4 {
                u += win[j] * l.h[j];
                dxi += win[j] * l.a[j];
            }
            let ux = dxi / h;
            i1 += w * u;
            i2 += w * (u * u + mu * ux * ux);
            i3 += w * u * u * u;
        }
    }
    (i1, i2, i3)
}

/// One reported row of a run: time, invariants, and error norms when an exact
/// solution is available.
#[derive(Clone, Copy, Debug)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub l2: Option<f64>,
    pub linf: Option<f64>,
}

/// Invariant drift against the first row. Relative by default; when the
/// baseline magnitude is below `ABS_DRIFT_FLOOR` the drift switches to the
/// absolute change and is flagged, since a relative change against ~0 is
/// meaningless.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Drift {
    pub value: f64,
    pub is_absolute: bool,
}

pub const ABS_DRIFT_FLOOR: f64 = 1e-9;

fn drift_against(base: f64, now: f64) -> Drift {
    if base.abs() < ABS_DRIFT_FLOOR {
        Drift { value: now - base, is_absolute: true }
    } else {
        Drift { value: (now - base) / base, is_absolute: false }
    }
}

/// Per-row drifts of (I₁, I₂, I₃) relative to the first row.
pub fn drifts(rows: &[DiagnosticsRow]) -> Vec<[Drift; 3]> {
    match rows.first() {
        None => Vec::new(),
        Some(first) => rows
            .iter()
            .map(|r| {
                [
                    drift_against(first.i1, r.i1),
                    drift_against(first.i2, r.i2),
                    drift_against(first.i3, r.i3),
                ]
            })
            .collect(),
    }
}

/// Least-squares growth rates of the three invariants over time, fitted to
/// all rows. Errors when fewer than two rows (or no time spread) are given.
pub fn growth_rates(rows: &[DiagnosticsRow]) -> Result<(f64, f64, f64)> {
    if rows.len() < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 diagnostic rows to fit rates, got {}",
            rows.len()
        )));
    }
    let n = rows.len() as f64;
    let tbar = rows.iter().map(|r| r.t).sum::<f64>() / n;
    let denom: f64 = rows.iter().map(|r| (r.t - tbar) * (r.t - tbar)).sum();
    if denom == 0.0 {
        return Err(Error::Domain("diagnostic rows share a single time".into()));
    }
    let slope = |f: &dyn Fn(&DiagnosticsRow) -> f64| {
        let ybar = rows.iter().map(f).sum::<f64>() / n;
        rows.iter().map(|r| (r.t - tbar) * (f(r) - ybar)).sum::<f64>() / denom
    };
    Ok((slope(&|r| r.i1), slope(&|r| r.i2), slope(&|r| r.i3)))
}

/// A located maximum of the reconstruction.
#[derive(Clone, Copy, Debug)]
pub struct PeakRecord {
    pub x: f64,
    pub u: f64,
}

/// Locate the maximum of U over [x_lo, x_hi]: dense sampling at h/10
/// resolution, then one quadratic refinement through the three samples around
/// the best one. A maximum at the window edge is returned unrefined.
pub fn find_peak(state: &RunState, x_lo: f64, x_hi: f64) -> Result<PeakRecord> {
    if !(x_hi > x_lo) {
        return Err(Error::Domain(format!("peak window [{x_lo}, {x_hi}] is empty")));
    }
    let step = state.mesh.h / 10.0;
    let mut xs = Vec::new();
    let mut x = x_lo;
    while x < x_hi {
        xs.push(x);
        x += step;
    }
    xs.push(x_hi);

    let mut best = 0usize;
    let mut best_u = f64::NEG_INFINITY;
    let us: Vec<f64> = xs
        .iter()
        .map(|&x| state.evaluate(x).map(|(u, _, _)| u))
        .collect::<Result<_>>()?;
    for (i, &u) in us.iter().enumerate() {
        if u > best_u {
            best_u = u;
            best = i;
        }
    }
    if best == 0 || best + 1 == xs.len() {
        return Ok(PeakRecord { x: xs[best], u: us[best] });
    }
    let (um, u0, up) = (us[best - 1], us[best], us[best + 1]);
    let curvature = um - 2.0 * u0 + up;
    let x_star = if curvature.abs() < 1e-300 {
        xs[best]
    } else {
        // Vertex of the parabola through the three samples.
        let dx = 0.5 * (um - up) / curvature;
        (xs[best] + dx * step).clamp(xs[best - 1], xs[best + 1])
    };
    let (u_star, _, _) = state.evaluate(x_star)?;
    if u_star >= u0 {
        Ok(PeakRecord { x: x_star, u: u_star })
    } else {
        Ok(PeakRecord { x: xs[best], u: u0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_tables, RootFamily};
    use crate::mesh::{build_mesh, CoeffVec, DirichletPair};
    use crate::stepper::initialize;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn state_from_coeffs(a: f64, b: f64, n: usize, mu: f64, coeffs: Vec<f64>) -> RunState {
        let mesh = build_mesh(a, b, n).unwrap();
        let tables = build_tables(RootFamily::Legendre, mesh.h).unwrap();
        let bc = DirichletPair { left: coeffs[0], right: coeffs[2 * n] };
        RunState {
            mesh,
            tables,
            coeffs: CoeffVec { a: coeffs },
            bc,
            dt: 1.0,
            mu,
            step_index: 0,
        }
    }

    /// Trapezoid-rule oracle on a million points, applied to the
    /// reconstruction itself.
    fn trapezoid_invariants(state: &RunState) -> (f64, f64, f64) {
        let m = 1_000_000usize;
        let (a, b) = (state.mesh.a, state.mesh.b);
        let dx = (b - a) / m as f64;
        let (mut i1, mut i2, mut i3) = (0.0, 0.0, 0.0);
        for i in 0..=m {
            let x = if i == m { b } else { a + i as f64 * dx };
            let (u, ux, _) = state.evaluate(x).unwrap();
            let w = if i == 0 || i == m { 0.5 * dx } else { dx };
            i1 += w * u;
            i2 += w * (u * u + state.mu * ux * ux);
            i3 += w * u * u * u;
        }
        (i1, i2, i3)
    }

    #[test]
    fn quadrature_matches_trapezoid_oracle_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..3 {
            let n = 40 + 10 * case;
            let coeffs: Vec<f64> = (0..2 * n + 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let st = state_from_coeffs(-1.0, 2.0, n, 0.5 + 0.5 * case as f64, coeffs);
            let (i1, i2, i3) = invariants(&st);
            let (t1, t2, t3) = trapezoid_invariants(&st);
            for (exact, approx) in [(i1, t1), (i2, t2), (i3, t3)] {
                assert!(
                    (exact - approx).abs() <= 1e-8 * (1.0 + exact.abs()),
                    "quadrature {exact} vs trapezoid {approx}"
                );
            }
        }
    }

    #[test]
    fn norms_are_zero_against_own_nodal_values() {
        let mesh = build_mesh(0.0, 30.0, 100).unwrap();
        let tables = build_tables(RootFamily::Legendre, mesh.h).unwrap();
        let u0 = |x: f64| (0.2 * x).sin();
        let bc = DirichletPair { left: u0(0.0), right: u0(30.0) };
        let st = initialize(mesh, tables, &u0, bc, 0.1, 1.0).unwrap();
        // An "exact" solution that reports the stored nodal values back.
        let coeffs = st.coeffs.clone();
        let h = st.mesh.h;
        let a = st.mesh.a;
        let exact = move |x: f64, _t: f64| {
            let j = ((x - a) / h).round() as usize;
            coeffs.node_value(j)
        };
        let (l2, linf) = error_norms(&st, &exact);
        assert_eq!(l2, 0.0);
        assert_eq!(linf, 0.0);
    }

    #[test]
    fn drift_is_relative_for_order_one_baselines() {
        let rows = vec![
            DiagnosticsRow { t: 0.0, i1: 1.1999445724, i2: 1.0, i3: 1.0, l2: None, linf: None },
            DiagnosticsRow { t: 80.0, i1: 1.2000388017, i2: 1.0, i3: 1.0, l2: None, linf: None },
        ];
        let d = drifts(&rows);
        assert!(!d[1][0].is_absolute);
        assert!((d[1][0].value - 7.8528e-5).abs() <= 1e-8);
        assert_eq!(d[0][0].value, 0.0);
    }

    #[test]
    fn drift_switches_to_absolute_near_zero_baseline() {
        let rows = vec![
            DiagnosticsRow { t: 0.0, i1: 1e-12, i2: 1.0, i3: -2e-10, l2: None, linf: None },
            DiagnosticsRow { t: 1.0, i1: 3e-4, i2: 1.5, i3: 1e-3, l2: None, linf: None },
        ];
        let d = drifts(&rows);
        assert!(d[1][0].is_absolute);
        assert!((d[1][0].value - (3e-4 - 1e-12)).abs() <= 1e-18);
        assert!(!d[1][1].is_absolute);
        assert!((d[1][1].value - 0.5).abs() <= 1e-12);
        assert!(d[1][2].is_absolute);
    }

    #[test]
    fn growth_rates_fit_two_points_exactly() {
        let rows = vec![
            DiagnosticsRow { t: 0.0, i1: 1.9965, i2: 0.1, i3: 0.0, l2: None, linf: None },
            DiagnosticsRow { t: 100.0, i1: 2.4965, i2: 0.1, i3: 0.0, l2: None, linf: None },
        ];
        let (r1, r2, _r3) = growth_rates(&rows).unwrap();
        assert!((r1 - 5e-3).abs() <= 1e-15);
        assert_eq!(r2, 0.0);
    }

    #[test]
    fn growth_rates_need_two_rows() {
        let rows = vec![DiagnosticsRow { t: 0.0, i1: 1.0, i2: 1.0, i3: 1.0, l2: None, linf: None }];
        assert!(growth_rates(&rows).is_err());
        assert!(growth_rates(&[]).is_err());
    }

    #[test]
    fn peak_of_fitted_pulse_is_recovered() {
        let mesh = build_mesh(0.0, 30.0, 1000).unwrap();
        let tables = build_tables(RootFamily::Legendre, mesh.h).unwrap();
        let u0 = |x: f64| {
            let s = (0.5 * (x - 10.0)).cosh();
            0.3 / (s * s)
        };
        let bc = DirichletPair { left: 0.0, right: 0.0 };
        let st = initialize(mesh, tables, &u0, bc, 0.05, 1.0).unwrap();
        let p = find_peak(&st, 0.0, 30.0).unwrap();
        assert!((p.x - 10.0).abs() <= 1e-3, "peak x {}", p.x);
        assert!((p.u - 0.3).abs() <= 1e-4, "peak u {}", p.u);
    }

    #[test]
    fn peak_of_monotone_profile_sits_at_window_edge() {
        let mesh = build_mesh(0.0, 10.0, 50).unwrap();
        let tables = build_tables(RootFamily::Legendre, mesh.h).unwrap();
        let u0 = |x: f64| 0.1 * x;
        let bc = DirichletPair { left: 0.0, right: 1.0 };
        let st = initialize(mesh, tables, &u0, bc, 0.1, 1.0).unwrap();
        let p = find_peak(&st, 2.0, 7.0).unwrap();
        assert!((p.x - 7.0).abs() <= 1e-12);
        assert!((p.u - 0.7).abs() <= 1e-9);
    }

    #[test]
    fn peak_rejects_empty_window() {
        let mesh = build_mesh(0.0, 10.0, 50).unwrap();
        let tables = build_tables(RootFamily::Legendre, mesh.h).unwrap();
        let bc = DirichletPair { left: 0.0, right: 0.0 };
        let st = initialize(mesh, tables, &|_| 0.0, bc, 0.1, 1.0).unwrap();
        assert!(find_peak(&st, 5.0, 5.0).is_err());
    }
}
