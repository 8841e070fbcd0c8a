//! The relation `H ≺≺ G` (H grows essentially more slowly than G).

use super::YoungFunction;

#[derive(Debug, Clone)]
pub struct GrowthComparison {
    pub faster: bool,
    /// `(k, log-log slope of H(kt)/G(t) over the last two decades)`.
    pub slopes: Vec<(f64, f64)>,
    pub diagnostic: String,
}

/// Decide `H ≺≺ G` from the tail of `t ↦ H(k t)/G(t)` on `[t_max/100, t_max]`.
///
/// The ratio must decay like a power: its log-log slope over the last two
/// decades must be below −0.01 for every sampled `k`. A constant ratio gives
/// slope 0 and is rejected.
pub fn essentially_faster<H, G>(h: &H, g: &G, k_values: &[f64], t_max: f64) -> GrowthComparison
where
    H: YoungFunction + ?Sized,
    G: YoungFunction + ?Sized,
{
    const MIN_SLOPE: f64 = -0.01;
    if !(t_max >= 1e8) {
        return GrowthComparison {
            faster: false,
            slopes: Vec::new(),
            diagnostic: format!("t_max = {t_max} below 1e8; inconclusive"),
        };
    }
    let t0 = t_max / 100.0;
    let mut slopes = Vec::with_capacity(k_values.len());
    let mut diagnostic = String::new();
    let mut faster = !k_values.is_empty();
    for &k in k_values {
        let r0 = h.value(k * t0) / g.value(t0);
        let r1 = h.value(k * t_max) / g.value(t_max);
        let slope = (r1.ln() - r0.ln()) / 100f64.ln();
        slopes.push((k, slope));
        if !slope.is_finite() {
            faster = false;
            diagnostic = format!("ratio not finite for k = {k}; inconclusive");
        } else if slope >= MIN_SLOPE && faster {
            faster = false;
            diagnostic = format!("H(kt)/G(t) has log-slope {slope:.4} at k = {k}");
        }
    }
    if k_values.is_empty() {
        diagnostic = "no k values".into();
    }
    GrowthComparison {
        faster,
        slopes,
        diagnostic,
    }
}
