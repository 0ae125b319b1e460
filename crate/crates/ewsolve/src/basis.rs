//! Cubic Hermite shape functions on one element and the per-run collocation
//! tables.
//!
//! On an element of width `h` with local coordinate ξ ∈ [0,1] the four shape
//! functions interpolate value and x-derivative at both ends: for a cubic
//! profile u the element coefficients are (u(left), u'(left), u(right),
//! u'(right)) and u(ξ) = Σ aⱼ Hⱼ(ξ). The derivative shapes H₂, H₄ carry one
//! factor of `h` so that the derivative coefficients are plain x-derivatives.
//!
//! `LocalBasis` holds values `h[j]`, first ξ-derivatives `a[j]`, and second
//! ξ-derivatives `b[j]`. Converting ξ-derivatives to x-derivatives divides by
//! the element width once or twice.

use crate::{Error, Result};

/// Placement of the two collocation points inside each element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootFamily {
    /// Roots of the shifted Legendre polynomial of degree 2 (Gauss points).
    Legendre,
    /// Roots of the shifted Chebyshev polynomial of degree 2.
    Chebyshev,
}

impl std::str::FromStr for RootFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "legendre" => Ok(RootFamily::Legendre),
            "chebyshev" => Ok(RootFamily::Chebyshev),
            other => Err(Error::Domain(format!(
                "unknown root family {other:?} (expected legendre or chebyshev)"
            ))),
        }
    }
}

impl std::fmt::Display for RootFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootFamily::Legendre => write!(f, "legendre"),
            RootFamily::Chebyshev => write!(f, "chebyshev"),
        }
    }
}

/// The two interior collocation points ξ₁ < ξ₂ for a family, in (0,1).
pub fn collocation_roots(family: RootFamily) -> (f64, f64) {
    match family {
        // (1 ∓ 1/√3) / 2
        RootFamily::Legendre => {
            let r = 1.0 / 3.0f64.sqrt();
            (0.5 * (1.0 - r), 0.5 * (1.0 + r))
        }
        // (1 ∓ 1/√2) / 2
        RootFamily::Chebyshev => {
            let r = 1.0 / 2.0f64.sqrt();
            (0.5 * (1.0 - r), 0.5 * (1.0 + r))
        }
    }
}

/// Shape function values and ξ-derivatives at one local point.
#[derive(Clone, Copy, Debug)]
pub struct LocalBasis {
    /// Values H₁..H₄.
    pub h: [f64; 4],
    /// First ξ-derivatives dHⱼ/dξ.
    pub a: [f64; 4],
    /// Second ξ-derivatives d²Hⱼ/dξ².
    pub b: [f64; 4],
}

/// Evaluate the four shape functions and their ξ-derivatives at ξ for an
/// element of the given width. Errors when ξ is outside [0,1] or width ≤ 0.
pub fn eval_local(xi: f64, width: f64) -> Result<LocalBasis> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::Domain(format!("local coordinate {xi} outside [0,1]")));
    }
    if !(width > 0.0) {
        return Err(Error::Domain(format!("element width {width} must be positive")));
    }
    let om = 1.0 - xi;
    Ok(LocalBasis {
        h: [
            (1.0 + 2.0 * xi) * om * om,
            xi * om * om * width,
            xi * xi * (3.0 - 2.0 * xi),
            xi * xi * (xi - 1.0) * width,
        ],
        a: [
            6.0 * xi * xi - 6.0 * xi,
            (1.0 - 4.0 * xi + 3.0 * xi * xi) * width,
            6.0 * xi - 6.0 * xi * xi,
            (3.0 * xi * xi - 2.0 * xi) * width,
        ],
        b: [
            12.0 * xi - 6.0,
            (6.0 * xi - 4.0) * width,
            6.0 - 12.0 * xi,
            (6.0 * xi - 2.0) * width,
        ],
    })
}

/// Shape data at the two collocation points of every element, computed once
/// per run. Index as `h[j][i]` for shape j at collocation point i.
#[derive(Clone, Debug)]
pub struct BasisTables {
    pub family: RootFamily,
    pub width: f64,
    pub xi: [f64; 2],
    /// Values Hⱼ(ξᵢ).
    pub h: [[f64; 2]; 4],
    /// First ξ-derivatives.
    pub a: [[f64; 2]; 4],
    /// Second ξ-derivatives.
    pub b: [[f64; 2]; 4],
}

/// Build the collocation tables for a family and element width.
pub fn build_tables(family: RootFamily, width: f64) -> Result<BasisTables> {
    let (x1, x2) = collocation_roots(family);
    let l1 = eval_local(x1, width)?;
    let l2 = eval_local(x2, width)?;
    let mut t = BasisTables {
        family,
        width,
        xi: [x1, x2],
        h: [[0.0; 2]; 4],
        a: [[0.0; 2]; 4],
        b: [[0.0; 2]; 4],
    };
    for j in 0..4 {
        t.h[j] = [l1.h[j], l2.h[j]];
        t.a[j] = [l1.a[j], l2.a[j]];
        t.b[j] = [l1.b[j], l2.b[j]];
    }
    Ok(t)
}
