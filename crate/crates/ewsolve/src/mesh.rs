//! Uniform mesh, element-to-DOF connectivity, and the global coefficient
//! vector.
//!
//! A mesh of N elements over [a,b] has nodes x₀..x_N and 2N+2 degrees of
//! freedom, two per node: DOF 2j+1 (1-based) is the value at node j and DOF
//! 2j+2 is the x-derivative there. Element k (1-based) couples the four DOFs
//! of its two end nodes.

use crate::{Error, Result};

/// Uniform mesh over [a,b] with N elements of width h = (b−a)/N.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub a: f64,
    pub b: f64,
    pub n_elems: usize,
    pub h: f64,
    /// Node coordinates x₀..x_N; the last node is exactly `b`.
    pub nodes: Vec<f64>,
}

/// Build a uniform mesh. Errors when b ≤ a or N < 2.
pub fn build_mesh(a: f64, b: f64, n_elems: usize) -> Result<Mesh> {
    if !(b > a) {
        return Err(Error::Domain(format!("interval [{a}, {b}] is empty")));
    }
    if n_elems < 2 {
        return Err(Error::Domain(format!("need at least 2 elements, got {n_elems}")));
    }
    let h = (b - a) / n_elems as f64;
    let mut nodes: Vec<f64> = (0..=n_elems).map(|i| a + i as f64 * h).collect();
    // Pin the endpoint so boundary lookups are exact despite rounding.
    nodes[n_elems] = b;
    Ok(Mesh { a, b, n_elems, h, nodes })
}

/// The four 1-based global DOFs of element k (1-based): (2k−1, 2k, 2k+1, 2k+2).
/// Errors when k is outside 1..=N.
pub fn global_dofs(k: usize, n_elems: usize) -> Result<[usize; 4]> {
    if k == 0 || k > n_elems {
        return Err(Error::Domain(format!(
            "element index {k} outside 1..={n_elems}"
        )));
    }
    Ok([2 * k - 1, 2 * k, 2 * k + 1, 2 * k + 2])
}

/// Dirichlet values pinned at the two boundary nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirichletPair {
    pub left: f64,
    pub right: f64,
}

/// Global coefficient vector of length 2N+2. 1-based DOF d lives at index d−1.
#[derive(Clone, Debug)]
pub struct CoeffVec {
    pub a: Vec<f64>,
}

impl CoeffVec {
    pub fn zeros(n_elems: usize) -> Self {
        CoeffVec { a: vec![0.0; 2 * n_elems + 2] }
    }

    pub fn n_elems(&self) -> usize {
        self.a.len() / 2 - 1
    }

    /// Value at 0-based node j.
    pub fn node_value(&self, j: usize) -> f64 {
        self.a[2 * j]
    }

    /// x-derivative at 0-based node j.
    pub fn node_deriv(&self, j: usize) -> f64 {
        self.a[2 * j + 1]
    }

    /// The four coefficients of 0-based element e.
    pub fn element_window(&self, e: usize) -> [f64; 4] {
        [
            self.a[2 * e],
            self.a[2 * e + 1],
            self.a[2 * e + 2],
            self.a[2 * e + 3],
        ]
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}
