//! Numeric growth indices.

use super::{NFunction, YoungFunction};
use crate::error::{Error, Result};
use crate::interp::log_grid;

/// Log grid on `[1e-6, 1e6]` with 4096 points.
pub fn default_index_grid() -> Vec<f64> {
    log_grid(1e-6, 1e6, 4096)
}

/// `(p⁻, p⁺)` as the hull of `1 + t g'/g` and `t g/G` over `grid`.
///
/// Breakpoints of `g` inside the grid range are added with both one-sided
/// derivatives, since the extremes of the ratios sit there for `PowerLog`.
pub fn estimate_indices(nf: &NFunction, grid: &[f64]) -> Result<(f64, f64)> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty index grid".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut visit = |t: f64, g: f64, dg: f64| -> Result<()> {
        let big = nf.value(t);
        let r1 = 1.0 + t * dg / g;
        let r2 = t * g / big;
        if !(r1.is_finite() && r2.is_finite()) || g <= 0.0 {
            return Err(Error::InvalidNFunction(format!("index ratio not finite at t = {t}")));
        }
        lo = lo.min(r1).min(r2);
        hi = hi.max(r1).max(r2);
        Ok(())
    };
    for &t in grid {
        visit(t, nf.deriv(t), nf.second_deriv(t))?;
    }
    let (gmin, gmax) = (grid[0], grid[grid.len() - 1]);
    for b in nf.breakpoints() {
        if b >= gmin && b <= gmax {
            let below = b * (1.0 - 1e-12);
            visit(b, nf.deriv_left(b), nf.second_deriv(below))?;
            visit(b, nf.deriv(b), nf.second_deriv(b))?;
        }
    }
    Ok((lo, hi))
}
