//! Time integration state: the initial fit, the linearized Crank-Nicolson
//! step, and point evaluation of the reconstruction.

use crate::assembly::{assemble_initial_system, assemble_step_system, scatter_solution};
use crate::basis::{eval_local, BasisTables};
use crate::mesh::{CoeffVec, DirichletPair, Mesh};
use crate::{Error, Result};

/// Coefficient magnitude beyond which the run is declared blown up.
pub const BLOWUP_LIMIT: f64 = 1e6;

/// Full solver state at one time level. Time is tracked as a step count so
/// that t = n·Δt carries no accumulated rounding.
#[derive(Clone, Debug)]
pub struct RunState {
    pub mesh: Mesh,
    pub tables: BasisTables,
    pub coeffs: CoeffVec,
    pub bc: DirichletPair,
    pub dt: f64,
    pub mu: f64,
    pub step_index: u64,
}

/// Fit the initial profile and wrap it into a run state.
///
/// The fit collocates u0 at both collocation points of every element with the
/// boundary values pinned; it propagates singularity and domain errors from
/// the linear solve.
pub fn initialize(
    mesh: Mesh,
    tables: BasisTables,
    u0: &dyn Fn(f64) -> f64,
    bc: DirichletPair,
    dt: f64,
    mu: f64,
) -> Result<RunState> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step {dt} must be positive")));
    }
    if !(mu > 0.0) {
        return Err(Error::Domain(format!("dispersion coefficient {mu} must be positive")));
    }
    let (m, rhs) = assemble_initial_system(&mesh, &tables, u0, bc)?;
    let x = m.factorize()?.solve(&rhs)?;
    let coeffs = scatter_solution(&x, mesh.n_elems, bc);
    Ok(RunState { mesh, tables, coeffs, bc, dt, mu, step_index: 0 })
}

impl RunState {
    /// Current time t = n·Δt.
    pub fn t(&self) -> f64 {
        self.step_index as f64 * self.dt
    }

    /// Advance one time level in place. Errors on a singular step matrix or
    /// when the new coefficients blow up (non-finite or larger than 1e6).
    pub fn step(&mut self) -> Result<()> {
        let (m, rhs) =
            assemble_step_system(&self.mesh, &self.tables, &self.coeffs, self.dt, self.mu, self.bc)?;
        let x = m.factorize()?.solve(&rhs)?;
        let next = scatter_solution(&x, self.mesh.n_elems, self.bc);
        let max_coeff = next.max_abs();
        self.step_index += 1;
        if !max_coeff.is_finite() || max_coeff > BLOWUP_LIMIT {
            return Err(Error::BlowUp { t: self.t(), max_coeff });
        }
        self.coeffs = next;
        Ok(())
    }

    /// Evaluate the reconstruction at x, returning (U, Uₓ, Uₓₓ). Errors when
    /// x lies outside the mesh interval.
    pub fn evaluate(&self, x: f64) -> Result<(f64, f64, f64)> {
        let mesh = &self.mesh;
        if !(x >= mesh.a && x <= mesh.b) {
            return Err(Error::Domain(format!(
                "point {x} outside mesh interval [{}, {}]",
                mesh.a, mesh.b
            )));
        }
        let h = mesh.h;
        let k = (((x - mesh.a) / h) as usize).min(mesh.n_elems - 1);
        // Clamp against end-point rounding; x is already known to be inside.
        let xi = ((x - mesh.nodes[k]) / h).clamp(0.0, 1.0);
        let l = eval_local(xi, h)?;
        let w = self.coeffs.element_window(k);
        let mut u = 0.0;
        let mut du = 0.0;
        let mut ddu = 0.0;
        for j in 0..4 {
            u += w[j] * l.h[j];
            du += w[j] * l.a[j];
            ddu += w[j] * l.b[j];
        }
        Ok((u, du / h, ddu / (h * h)))
    }

    /// Signed x-derivatives of the reconstruction at the two boundary nodes.
    /// With pinned boundary values these are the honest measure of how well
    /// the run respects "flat at the walls".
    pub fn boundary_slopes(&self) -> (f64, f64) {
        (self.coeffs.node_deriv(0), self.coeffs.node_deriv(self.mesh.n_elems))
    }
}
