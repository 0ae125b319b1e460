//! Von Neumann stability analysis of the linearized step with frozen
//! coefficients Ū (advecting value) and Ū′ (advecting slope).
//!
//! Two views are provided. The per-row view treats the flat coefficient
//! sequence as one scalar field: substituting aⱼ ∝ ξⁿ e^{ijφ} into a single
//! collocation row gives the ratio |ξ|(φ) = |Σβⱼe^{imⱼφ}| / |Σαⱼe^{imⱼφ}|
//! over the four element offsets mⱼ = (0,1,2,3). The coupled view respects
//! the two-DOF-per-node structure: per node phase θ it forms the 2x2 system
//! L·gⁿ⁺¹ = R·gⁿ and takes the spectral radius of L⁻¹R, which is the growth
//! factor of a genuine mesh mode. The per-row ratio is a diagnostic that can
//! sit slightly above one even when every coupled mode is neutrally stable.

use num_complex::Complex64;

use crate::basis::BasisTables;
use crate::{Error, Result};

/// The per-row step symbols (α, β): row i of the linearized step reads
/// Σⱼ αⱼ aⁿ⁺¹ = Σⱼ βⱼ aⁿ over the four element DOFs, with
/// αⱼ = Hⱼ(1/Δt + Ū′/2) + Aⱼ·Ū/(2h) − μBⱼ/(Δt h²) and
/// βⱼ = Hⱼ/Δt − μBⱼ/(Δt h²).
pub fn row_symbols(
    tables: &BasisTables,
    row: usize,
    ubar: f64,
    uprime: f64,
    dt: f64,
    mu: f64,
) -> ([f64; 4], [f64; 4]) {
    assert!(row < 2, "row index {row} must be 0 or 1");
    let h = tables.width;
    let md = mu / (dt * h * h);
    let mut alpha = [0.0; 4];
    let mut beta = [0.0; 4];
    for j in 0..4 {
        let hj = tables.h[j][row];
        let aj = tables.a[j][row];
        let bj = tables.b[j][row];
        alpha[j] = hj * (1.0 / dt + 0.5 * uprime) + aj * ubar / (2.0 * h) - md * bj;
        beta[j] = hj / dt - md * bj;
    }
    (alpha, beta)
}

/// Scalar amplification modulus of one row at mode angle φ. Errors when the
/// denominator vanishes (a mode the row cannot see).
pub fn amplification(alpha: &[f64; 4], beta: &[f64; 4], phi: f64) -> Result<f64> {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    for j in 0..4 {
        let e = Complex64::from_polar(1.0, j as f64 * phi);
        num += beta[j] * e;
        den += alpha[j] * e;
    }
    if den.norm() < 1e-300 {
        return Err(Error::SingularMode { phi });
    }
    Ok(num.norm() / den.norm())
}

/// Per-row amplification over a uniform angle grid φ = 2πk/G, k = 0..G−1.
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub angles: Vec<f64>,
    pub row1: Vec<f64>,
    pub row2: Vec<f64>,
    pub max_row1: f64,
    pub max_row2: f64,
}

/// Scan both rows over `grid` angles. Errors when grid < 64: coarser grids
/// can miss the narrow peaks of the ratio curves.
pub fn scan(
    tables: &BasisTables,
    ubar: f64,
    uprime: f64,
    dt: f64,
    mu: f64,
    grid: usize,
) -> Result<ScanResult> {
    if grid < 64 {
        return Err(Error::Domain(format!("angle grid {grid} too coarse, need at least 64")));
    }
    let (a1, b1) = row_symbols(tables, 0, ubar, uprime, dt, mu);
    let (a2, b2) = row_symbols(tables, 1, ubar, uprime, dt, mu);
    let mut out = ScanResult {
        angles: Vec::with_capacity(grid),
        row1: Vec::with_capacity(grid),
        row2: Vec::with_capacity(grid),
        max_row1: 0.0,
        max_row2: 0.0,
    };
    for k in 0..grid {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / grid as f64;
        let r1 = amplification(&a1, &b1, phi)?;
        let r2 = amplification(&a2, &b2, phi)?;
        out.angles.push(phi);
        out.row1.push(r1);
        out.row2.push(r2);
        out.max_row1 = out.max_row1.max(r1);
        out.max_row2 = out.max_row2.max(r2);
    }
    Ok(out)
}

/// Growth factor of the coupled two-DOF mode at node phase θ: the spectral
/// radius of L⁻¹R where row i of L is
/// (α₁ᵢ + e^{iθ}α₃ᵢ, α₂ᵢ + e^{iθ}α₄ᵢ) and R is built likewise from β.
pub fn coupled_amplification(
    tables: &BasisTables,
    ubar: f64,
    uprime: f64,
    dt: f64,
    mu: f64,
    theta: f64,
) -> Result<f64> {
    let e = Complex64::from_polar(1.0, theta);
    let mut l = [[Complex64::new(0.0, 0.0); 2]; 2];
    let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        let (alpha, beta) = row_symbols(tables, i, ubar, uprime, dt, mu);
        l[i][0] = Complex64::new(alpha[0], 0.0) + e * alpha[2];
        l[i][1] = Complex64::new(alpha[1], 0.0) + e * alpha[3];
        r[i][0] = Complex64::new(beta[0], 0.0) + e * beta[2];
        r[i][1] = Complex64::new(beta[1], 0.0) + e * beta[3];
    }
    let det = l[0][0] * l[1][1] - l[0][1] * l[1][0];
    if det.norm() < 1e-300 {
        return Err(Error::SingularMode { phi: theta });
    }
    // G = L⁻¹ R.
    let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
    for c in 0..2 {
        g[0][c] = (l[1][1] * r[0][c] - l[0][1] * r[1][c]) / det;
        g[1][c] = (l[0][0] * r[1][c] - l[1][0] * r[0][c]) / det;
    }
    let tr = g[0][0] + g[1][1];
    let dg = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let disc = (tr * tr - 4.0 * dg).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    Ok(l1.norm().max(l2.norm()))
}

/// Maximum coupled growth factor over a uniform θ grid (same grid rule).
pub fn coupled_max(
    tables: &BasisTables,
    ubar: f64,
    uprime: f64,
    dt: f64,
    mu: f64,
    grid: usize,
) -> Result<f64> {
    if grid < 64 {
        return Err(Error::Domain(format!("angle grid {grid} too coarse, need at least 64")));
    }
    let mut best = 0.0f64;
    for k in 0..grid {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / grid as f64;
        best = best.max(coupled_amplification(tables, ubar, uprime, dt, mu, theta)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_tables, RootFamily};

    fn tab(h: f64) -> BasisTables {
        build_tables(RootFamily::Legendre, h).unwrap()
    }

    #[test]
    fn zero_state_is_neutrally_stable() {
        // With Ū = Ū′ = 0 the two sides of the step coincide, so every mode
        // has amplification exactly one.
        let t = tab(0.03);
        let s = scan(&t, 0.0, 0.0, 0.05, 1.0, 4096).unwrap();
        assert!((s.max_row1 - 1.0).abs() <= 1e-12);
        assert!((s.max_row2 - 1.0).abs() <= 1e-12);
        for (&r1, &r2) in s.row1.iter().zip(&s.row2) {
            assert!((r1 - 1.0).abs() <= 1e-12);
            assert!((r2 - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn modulus_has_conjugate_symmetry() {
        let t = tab(0.1);
        let (a, b) = row_symbols(&t, 0, 0.9, 0.1, 0.05, 1.0);
        for k in 1..50 {
            let phi = 0.12 * k as f64;
            let plus = amplification(&a, &b, phi).unwrap();
            let minus = amplification(&a, &b, 2.0 * std::f64::consts::PI - phi).unwrap();
            assert!((plus - minus).abs() <= 1e-12);
        }
    }

    #[test]
    fn per_row_peak_matches_frozen_value() {
        // Moderate advection state: the first-row ratio peaks slightly above
        // one (independently computed reference value), the second stays at
        // or below one. This tiny excursion is a property of the per-row
        // diagnostic, not a mode growth rate; see the coupled tests.
        let t = tab(0.03);
        let s = scan(&t, 0.3, 0.0, 0.05, 1.0, 4096).unwrap();
        assert!((s.max_row1 - 1.000065034).abs() <= 1e-8, "row1 max {}", s.max_row1);
        assert!(s.max_row2 <= 1.0 + 1e-9, "row2 max {}", s.max_row2);
        assert!(s.max_row2 >= 0.999, "row2 max {}", s.max_row2);
    }

    #[test]
    fn grid_refinement_is_converged() {
        let t = tab(0.03);
        let coarse = scan(&t, 0.3, 0.0, 0.05, 1.0, 4096).unwrap();
        let fine = scan(&t, 0.3, 0.0, 0.05, 1.0, 8192).unwrap();
        assert!((coarse.max_row1 - fine.max_row1).abs() <= 1e-9);
        assert!((coarse.max_row2 - fine.max_row2).abs() <= 1e-9);
    }

    #[test]
    fn scan_requires_a_reasonable_grid() {
        let t = tab(0.03);
        assert!(scan(&t, 0.0, 0.0, 0.05, 1.0, 63).is_err());
        assert!(coupled_max(&t, 0.0, 0.0, 0.05, 1.0, 32).is_err());
    }

    #[test]
    fn degenerate_symbols_report_singular_mode() {
        let a = [0.0; 4];
        let b = [1.0, 0.0, 0.0, 0.0];
        assert!(matches!(amplification(&a, &b, 0.5), Err(Error::SingularMode { .. })));
    }

    #[test]
    fn coupled_modes_are_neutrally_stable() {
        // The genuine two-DOF modes sit on the unit circle to rounding for
        // all frozen states, including ones where the per-row ratio exceeds
        // one; this is the quantitative form of unconditional stability.
        let t = tab(0.03);
        for &(ubar, dt) in &[(0.3, 0.05), (0.9, 0.1), (3.6, 10.0), (0.1, 0.01)] {
            let m = coupled_max(&t, ubar, 0.0, dt, 1.0, 1024).unwrap();
            assert!(m <= 1.0 + 1e-12, "coupled max {m} at ubar={ubar}, dt={dt}");
            assert!(m >= 1.0 - 1e-12, "coupled max {m} at ubar={ubar}, dt={dt}");
        }
    }

    #[test]
    fn coupled_handles_nonzero_slope_state() {
        let t = tab(0.1);
        let m = coupled_max(&t, 0.5, 0.2, 0.1, 1.0, 512).unwrap();
        assert!(m.is_finite());
        assert!(m <= 1.0 + 1e-10, "coupled max {m}");
    }
}
