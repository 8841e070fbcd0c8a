//! Bracketed root finding for monotone scalar maps.

use crate::error::{Error, Result};

/// Maximum number of geometric bracket expansions.
pub const MAX_DOUBLINGS: usize = 200;

/// Solve `f(τ) = target` for a nondecreasing `f` on `(0, ∞)`.
///
/// Returns the smallest `τ` (to floating-point resolution) with
/// `f(τ) ≥ target`, which is the right choice when `f` jumps across
/// `target`. The bracket `[lo, hi]` is grown geometrically when it does not
/// enclose the target.
pub fn solve_increasing<F: Fn(f64) -> f64>(f: F, target: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(target.is_finite()) {
        return Err(Error::Bracket(format!("non-finite target {target}")));
    }
    let mut lo = lo.max(f64::MIN_POSITIVE);
    let mut hi = hi.max(lo * 2.0);
    let mut k = 0;
    while f(lo) >= target {
        lo *= 0.5;
        k += 1;
        if k > MAX_DOUBLINGS || lo == 0.0 {
            if target <= 0.0 {
                return Ok(0.0);
            }
            return Err(Error::Bracket(format!("no lower bracket for target {target}")));
        }
    }
    let mut k = 0;
    while f(hi) < target {
        hi *= 2.0;
        k += 1;
        if k > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::Bracket(format!(
                "target {target} beyond range after {MAX_DOUBLINGS} doublings"
            )));
        }
    }
    // Invariant: f(lo) < target <= f(hi).
    for _ in 0..400 {
        // Geometric midpoint while the bracket spans decades, arithmetic after.
        let mid = if hi > 4.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let r = solve_increasing(|t| t * t * t, 27.0, 1e-3, 1e-2).unwrap();
        assert!((r - 3.0).abs() < 1e-14);
    }

    #[test]
    fn jump_returns_jump_location() {
        let f = |t: f64| if t < 1.0 { t } else { t + 1.0 };
        let r = solve_increasing(f, 1.5, 0.1, 10.0).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unbounded_range_fails() {
        let f = |t: f64| 1.0 - 1.0 / (1.0 + t);
        assert!(solve_increasing(f, 2.0, 0.1, 1.0).is_err());
    }
}
