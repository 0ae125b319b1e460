//! Banded matrix storage and LU factorization with partial pivoting.
//!
//! The collocation operator couples each row to at most seven consecutive
//! columns (bandwidth 3 on each side). Rows are stored compactly: row r holds
//! columns r−kl..r+ku in a slice of width kl+ku+1. Partial pivoting can push
//! fill up to kl extra superdiagonals; the factorization therefore works in a
//! left-justified copy of the band, the standard trick for in-band pivoted LU.

use crate::{Error, Result};

/// Row-compact banded matrix: entry (r,c) sits at `data[r*(kl+ku+1) + c+kl-r]`.
#[derive(Clone, Debug)]
pub struct BandedMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        BandedMatrix { n, kl, ku, data: vec![0.0; n * (kl + ku + 1)] }
    }

    fn offset(&self, r: usize, c: usize) -> Option<usize> {
        if r >= self.n || c >= self.n {
            return None;
        }
        let lo = r.saturating_sub(self.kl);
        let hi = (r + self.ku).min(self.n - 1);
        if c < lo || c > hi {
            return None;
        }
        Some(r * (self.kl + self.ku + 1) + c + self.kl - r)
    }

    /// Entry (r,c); zero outside the band.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        assert!(r < self.n && c < self.n, "index ({r},{c}) outside {0}x{0}", self.n);
        match self.offset(r, c) {
            Some(o) => self.data[o],
            None => 0.0,
        }
    }

    /// Add v to entry (r,c). Panics outside the band: the assembly stencil
    /// never writes there, so such a write is a bug.
    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        let o = self
            .offset(r, c)
            .unwrap_or_else(|| panic!("entry ({r},{c}) outside band of width {}/{}", self.kl, self.ku));
        self.data[o] += v;
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        let o = self
            .offset(r, c)
            .unwrap_or_else(|| panic!("entry ({r},{c}) outside band of width {}/{}", self.kl, self.ku));
        self.data[o] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Max row sum of absolute values.
    pub fn norm_inf(&self) -> f64 {
        let mut best = 0.0f64;
        for r in 0..self.n {
            let lo = r.saturating_sub(self.kl);
            let hi = (r + self.ku).min(self.n - 1);
            let s: f64 = (lo..=hi).map(|c| self.get(r, c).abs()).sum();
            best = best.max(s);
        }
        best
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for r in 0..self.n {
            let lo = r.saturating_sub(self.kl);
            let hi = (r + self.ku).min(self.n - 1);
            y[r] = (lo..=hi).map(|c| self.get(r, c) * x[c]).sum();
        }
        y
    }

    /// LU-factorize with partial pivoting. Errors when a pivot magnitude
    /// falls below 1e-14 times the largest entry of the matrix.
    pub fn factorize(&self) -> Result<BandedFactorization> {
        let n = self.n;
        let m1 = self.kl;
        let m2 = self.ku;
        let mm = m1 + m2 + 1;
        let max_abs = self.max_abs();
        let threshold = 1e-14 * max_abs;

        // Working copy; rows are progressively left-justified so position 0
        // always holds the leading in-band entry of the row.
        let mut au = self.data.clone();
        let mut al = vec![0.0; n * m1];
        let mut ipiv = vec![0usize; n];

        let row = |i: usize| i * mm;

        // Left-justify the first m1 rows (their bands start inside the slice).
        let mut l = m1;
        for i in 0..m1.min(n) {
            for j in (m1 - i)..mm {
                au[row(i) + j - l] = au[row(i) + j];
            }
            l -= 1;
            for j in (mm - l - 1)..mm {
                au[row(i) + j] = 0.0;
            }
        }

        // Pivot window; clamped so a band wider than the matrix stays in range.
        let mut l = m1.min(n);
        for k in 0..n {
            let mut piv = au[row(k)];
            let mut ip = k;
            if l < n {
                l += 1;
            }
            for j in (k + 1)..l {
                if au[row(j)].abs() > piv.abs() {
                    piv = au[row(j)];
                    ip = j;
                }
            }
            ipiv[k] = ip;
            if piv.abs() < threshold || max_abs == 0.0 {
                return Err(Error::Singular { pivot: piv.abs(), threshold });
            }
            if ip != k {
                for j in 0..mm {
                    au.swap(row(k) + j, row(ip) + j);
                }
            }
            for i in (k + 1)..l {
                let factor = au[row(i)] / au[row(k)];
                al[k * m1 + (i - k - 1)] = factor;
                for j in 1..mm {
                    au[row(i) + j - 1] = au[row(i) + j] - factor * au[row(k) + j];
                }
                au[row(i) + mm - 1] = 0.0;
            }
        }

        Ok(BandedFactorization { n, kl: m1, ku: m2, au, al, ipiv })
    }
}

/// Pivoted LU factors of a banded matrix.
#[derive(Clone, Debug)]
pub struct BandedFactorization {
    n: usize,
    kl: usize,
    ku: usize,
    au: Vec<f64>,
    al: Vec<f64>,
    ipiv: Vec<usize>,
}

impl BandedFactorization {
    /// Solve M·x = rhs. Errors on a length mismatch.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.n {
            return Err(Error::Dimension(format!(
                "rhs length {} does not match system size {}",
                rhs.len(),
                self.n
            )));
        }
        let n = self.n;
        let m1 = self.kl;
        let mm = m1 + self.ku + 1;
        let mut x = rhs.to_vec();

        let mut l = m1.min(n);
        for k in 0..n {
            let ip = self.ipiv[k];
            if ip != k {
                x.swap(k, ip);
            }
            if l < n {
                l += 1;
            }
            for i in (k + 1)..l {
                x[i] -= self.al[k * m1 + (i - k - 1)] * x[k];
            }
        }

        let mut l = 1;
        for i in (0..n).rev() {
            let mut dum = x[i];
            for k in 1..l {
                dum -= self.au[i * mm + k] * x[i + k];
            }
            x[i] = dum / self.au[i * mm];
            if l < mm {
                l += 1;
            }
        }
        Ok(x)
    }
}
