//! Inequalities involving whole grid functions.

use super::gaps::check_q;
use crate::error::{Error, Result};
use crate::grid::{modular_sg, GridFunction, PairKernel, SgDomain};
use crate::nfunction::NFunction;

fn check_positive(u: &GridFunction, name: &str) -> Result<()> {
    if let Some(i) = u.values().iter().position(|&x| !(x > 0.0)) {
        return Err(Error::NonPositive(format!("{name} is not positive at node {i}")));
    }
    Ok(())
}

/// Discrete Díaz–Saa pairing
/// `⟨(−Δ)_g u, (u^q − v^q)/u^{q−1}⟩ + ⟨(−Δ)_g v, (v^q − u^q)/v^{q−1}⟩`
/// over `ℝ² ∖ (Ωᶜ × Ωᶜ)`; the test functions vanish off `Ω`.
pub fn diaz_saa_value(u: &GridFunction, v: &GridFunction, g: &NFunction, s: f64, q: f64) -> Result<f64> {
    check_q(g, q)?;
    check_positive(u, "u")?;
    check_positive(v, "v")?;
    if u.mesh() != v.mesh() {
        return Err(Error::InvalidParameter("u and v live on different meshes".into()));
    }
    let ratio = u
        .values()
        .iter()
        .zip(v.values())
        .fold(1.0_f64, |m, (a, b)| m.max(a / b).max(b / a));
    if !(ratio < 1e6) {
        return Err(Error::InvalidParameter(format!("u/v ratio {ratio:e} not bounded by 1e6")));
    }
    let kernel = PairKernel::new(u.mesh(), s)?;
    let (uu, vv) = (u.values(), v.values());
    let psi_u: Vec<f64> = uu
        .iter()
        .zip(vv)
        .map(|(&a, &b)| (a.powf(q) - b.powf(q)) / a.powf(q - 1.0))
        .collect();
    let psi_v: Vec<f64> = uu
        .iter()
        .zip(vv)
        .map(|(&a, &b)| (b.powf(q) - a.powf(q)) / b.powf(q - 1.0))
        .collect();
    Ok(kernel.pairing(g, uu, &psi_u) + kernel.pairing(g, vv, &psi_v))
}

/// Magnitude used to scale Díaz–Saa tolerances: the sum of absolute pairings.
pub fn diaz_saa_scale(u: &GridFunction, v: &GridFunction, g: &NFunction, s: f64) -> Result<f64> {
    let kernel = PairKernel::new(u.mesh(), s)?;
    let (uu, vv) = (u.values(), v.values());
    Ok(kernel.pairing(g, uu, uu).abs() + kernel.pairing(g, vv, vv).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayProbe {
    /// `(W(w₀), W(w₁), W(w_t))`.
    pub w_values: (f64, f64, f64),
    /// `(1−t) W(w₀) + t W(w₁) − W(w_t)`.
    pub gap: f64,
}

/// Convexity of `W(w) = Φ_{s,G}(w^{1/q})` along the chord from `u₀^q` to
/// `u₁^q`.
pub fn ray_convexity_probe(
    u0: &GridFunction,
    u1: &GridFunction,
    t: f64,
    g: &NFunction,
    s: f64,
    q: f64,
) -> Result<RayProbe> {
    check_q(g, q)?;
    check_positive(u0, "u0")?;
    check_positive(u1, "u1")?;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must lie in (0,1)")));
    }
    let w = |f: &GridFunction| modular_sg(f, g, s, SgDomain::FullSpace);
    let wt = GridFunction::new(
        *u0.mesh(),
        u0.values()
            .iter()
            .zip(u1.values())
            .map(|(a, b)| ((1.0 - t) * a.powf(q) + t * b.powf(q)).powf(1.0 / q))
            .collect(),
    )?;
    let (w0, w1, wm) = (w(u0)?, w(u1)?, w(&wt)?);
    Ok(RayProbe {
        w_values: (w0, w1, wm),
        gap: (1.0 - t) * w0 + t * w1 - wm,
    })
}
