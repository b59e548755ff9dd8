//! Natural cubic spline interpolation.
//!
//! Fits second derivatives with the Thomas tridiagonal solve; the natural
//! end condition (zero second derivative at both end knots) makes the
//! two-knot case degenerate to a straight line.

use crate::error::{Error, Result};

/// A natural cubic spline through strictly increasing knots.
#[derive(Debug, Clone)]
pub struct NaturalCubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivative at each knot; endpoints are zero by construction.
    m: Vec<f64>,
}

impl NaturalCubicSpline {
    pub fn fit(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                left: xs.len(),
                right: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::invalid(
                "knots",
                format!("need at least 2 knots, got {}", xs.len()),
            ));
        }
        if xs.iter().chain(ys).any(|v| !v.is_finite()) {
            return Err(Error::invalid("knots", "knot coordinates must be finite"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "knots",
                "knot positions must be strictly increasing",
            ));
        }

        let n = xs.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // tridiagonal system for interior second derivatives:
            // h[i-1] m[i-1] + 2(h[i-1]+h[i]) m[i] + h[i] m[i+1] = rhs[i]
            let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut sub = vec![0.0; k];
            let mut sup = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 1..n - 1 {
                diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
                sub[i - 1] = h[i - 1];
                sup[i - 1] = h[i];
                rhs[i - 1] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
            }
            let interior = solve_tridiagonal(&sub, &mut diag, &sup, &mut rhs);
            m[1..n - 1].copy_from_slice(&interior);
        }

        Ok(Self {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            m,
        })
    }

    /// Evaluates the spline at `x`. Outside the knot range the boundary
    /// segment's cubic is extended.
    pub fn evaluate(&self, x: f64) -> f64 {
        let i = self.segment_index(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let h = x1 - x0;
        let d = x - x0;
        // Horner form anchored at the left knot: exact there, and exactly
        // constant across a segment whose knots share one value.
        let b = (y1 - y0) / h - h * (2.0 * m0 + m1) / 6.0;
        let c = m0 / 2.0;
        let e = (m1 - m0) / (6.0 * h);
        y0 + d * (b + d * (c + d * e))
    }

    fn segment_index(&self, x: f64) -> usize {
        // last segment whose start is <= x, clamped to valid segments
        match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p => (p - 1).min(self.xs.len() - 2),
        }
    }
}

/// Thomas algorithm; mutates `diag` and `rhs` in place as scratch.
fn solve_tridiagonal(sub: &[f64], diag: &mut [f64], sup: &[f64], rhs: &mut [f64]) -> Vec<f64> {
    let n = diag.len();
    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    }
    x
}
