//! Assembly of the two banded collocation systems: the initial interpolation
//! fit and the linearized time step.
//!
//! Each element contributes two rows (one per collocation point), giving 2N
//! equations. The two boundary value DOFs are pinned by the Dirichlet data
//! and eliminated, leaving 2N unknowns: the interior value/derivative DOFs
//! plus the two boundary derivative DOFs. Column elimination moves each known
//! boundary coefficient times its column into the right-hand side.
//!
//! The time step treats Uₜ and the dispersive term with Crank-Nicolson and
//! linearizes U·Uₓ about the current level (product linearization), with the
//! advecting value V and slope W frozen at each collocation point. Row r of
//! the step system reads
//!   Σⱼ aⁿ⁺¹ⱼ [Hⱼ(1/Δt + W/2) + Aⱼ V/(2h) − μ Bⱼ/(Δt h²)]
//!     = Σⱼ aⁿⱼ [Hⱼ/Δt − μ Bⱼ/(Δt h²)].

use crate::banded::BandedMatrix;
use crate::basis::BasisTables;
use crate::mesh::{global_dofs, CoeffVec, DirichletPair, Mesh};
use crate::{Error, Result};

/// Bandwidth of the collocation operator on each side of the diagonal.
pub const BANDWIDTH: usize = 3;

/// Linearization state frozen at one collocation point: the current value V
/// and x-slope W there.
#[derive(Clone, Copy, Debug)]
pub struct FrozenState {
    pub value: f64,
    pub slope: f64,
}

/// Evaluate the frozen state of one element window at collocation point i.
pub fn frozen_state(tables: &BasisTables, window: &[f64; 4], i: usize) -> FrozenState {
    let mut value = 0.0;
    let mut dxi = 0.0;
    for j in 0..4 {
        value += window[j] * tables.h[j][i];
        dxi += window[j] * tables.a[j][i];
    }
    FrozenState { value, slope: dxi / tables.width }
}

/// Column of a 1-based global DOF in the reduced system, or None for the two
/// pinned boundary value DOFs (1 and 2N+1).
pub fn eliminated_column(dof: usize, n_elems: usize) -> Option<usize> {
    let n2 = 2 * n_elems;
    assert!(dof >= 1 && dof <= n2 + 2, "DOF {dof} outside 1..={}", n2 + 2);
    if dof == 1 || dof == n2 + 1 {
        None
    } else if dof <= n2 {
        Some(dof - 2)
    } else {
        // dof == 2N+2, the right boundary derivative.
        Some(n2 - 1)
    }
}

fn check_shapes(mesh: &Mesh, tables: &BasisTables) -> Result<()> {
    if (tables.width - mesh.h).abs() > 1e-12 * mesh.h.abs() {
        return Err(Error::Dimension(format!(
            "basis tables built for width {} but mesh width is {}",
            tables.width, mesh.h
        )));
    }
    Ok(())
}

fn bc_value(dof: usize, n_elems: usize, bc: DirichletPair) -> f64 {
    if dof == 1 {
        bc.left
    } else if dof == 2 * n_elems + 1 {
        bc.right
    } else {
        unreachable!("DOF {dof} is not a boundary value DOF")
    }
}

/// Assemble the banded system for one linearized time step from the current
/// coefficients. Returns the matrix and right-hand side of size 2N.
pub fn assemble_step_system(
    mesh: &Mesh,
    tables: &BasisTables,
    current: &CoeffVec,
    dt: f64,
    mu: f64,
    bc: DirichletPair,
) -> Result<(BandedMatrix, Vec<f64>)> {
    check_shapes(mesh, tables)?;
    let n = mesh.n_elems;
    if current.a.len() != 2 * n + 2 {
        return Err(Error::Dimension(format!(
            "coefficient vector has length {} but mesh needs {}",
            current.a.len(),
            2 * n + 2
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step {dt} must be positive")));
    }
    let h = mesh.h;
    let inv_dt = 1.0 / dt;
    let md = mu / (dt * h * h);

    let mut m = BandedMatrix::new(2 * n, BANDWIDTH, BANDWIDTH);
    let mut rhs = vec![0.0; 2 * n];

    for k in 1..=n {
        let dofs = global_dofs(k, n)?;
        let window = current.element_window(k - 1);
        for i in 0..2 {
            let r = 2 * (k - 1) + i;
            let fs = frozen_state(tables, &window, i);
            for (j, &dof) in dofs.iter().enumerate() {
                let hj = tables.h[j][i];
                let aj = tables.a[j][i];
                let bj = tables.b[j][i];
                rhs[r] += current.a[dof - 1] * (hj * inv_dt - md * bj);
                let coef = hj * (inv_dt + 0.5 * fs.slope) + aj * fs.value / (2.0 * h) - md * bj;
                match eliminated_column(dof, n) {
                    Some(c) => m.add(r, c, coef),
                    None => rhs[r] -= coef * bc_value(dof, n, bc),
                }
            }
        }
    }
    Ok((m, rhs))
}

/// Assemble the interpolation system that fits the initial profile: the
/// reconstruction must match u0 at both collocation points of every element.
pub fn assemble_initial_system(
    mesh: &Mesh,
    tables: &BasisTables,
    u0: &dyn Fn(f64) -> f64,
    bc: DirichletPair,
) -> Result<(BandedMatrix, Vec<f64>)> {
    check_shapes(mesh, tables)?;
    let n = mesh.n_elems;
    let h = mesh.h;
    let mut m = BandedMatrix::new(2 * n, BANDWIDTH, BANDWIDTH);
    let mut rhs = vec![0.0; 2 * n];

    for k in 1..=n {
        let dofs = global_dofs(k, n)?;
        let x_left = mesh.nodes[k - 1];
        for i in 0..2 {
            let r = 2 * (k - 1) + i;
            rhs[r] = u0(x_left + tables.xi[i] * h);
            for (j, &dof) in dofs.iter().enumerate() {
                let hj = tables.h[j][i];
                match eliminated_column(dof, n) {
                    Some(c) => m.add(r, c, hj),
                    None => rhs[r] -= hj * bc_value(dof, n, bc),
                }
            }
        }
    }
    Ok((m, rhs))
}

/// Rebuild the full coefficient vector from a reduced solution, re-inserting
/// the pinned boundary values.
pub fn scatter_solution(x: &[f64], n_elems: usize, bc: DirichletPair) -> CoeffVec {
    let n2 = 2 * n_elems;
    assert_eq!(x.len(), n2, "reduced solution must have length 2N");
    let mut full = CoeffVec::zeros(n_elems);
    full.a[0] = bc.left;
    full.a[n2] = bc.right;
    full.a[1..n2].copy_from_slice(&x[..n2 - 1]);
    full.a[n2 + 1] = x[n2 - 1];
    full
}
