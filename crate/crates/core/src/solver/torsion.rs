//! Closed-form torsion solution of the fractional Laplacian on `(−1, 1)`.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use super::minimize::{minimize_j, SolverOptions};
use super::{ProblemSpec, SolveResult};
use crate::error::Result;
use crate::grid::{GridFunction, Mesh};
use crate::nfunction::NFunction;

/// Forcing `k` for which `u(x) = (1 − x²)^s` minimizes
/// `½∬ |u(x)−u(y)|² / |x−y|^{1+2s} − ∫ k u` on `(−1, 1)`.
///
/// The energy's Euler–Lagrange operator is `(2/C_{1,s}) (−Δ)^s` and
/// `(−Δ)^s (1−x²)_+^s = 2^{2s} Γ(1+s) Γ(½+s) / Γ(½)`, so
/// `k = 2·2^{2s} Γ(1+s) Γ(½+s) / (Γ(½) C_{1,s})` with
/// `C_{1,s} = s 4^s Γ(½+s) / (√π Γ(1−s))`. For `s = ½` this is `2π`.
pub fn torsion_forcing(s: f64) -> f64 {
    let a = 4f64.powf(s) * gamma(1.0 + s) * gamma(0.5 + s) / PI.sqrt();
    let c = s * 4f64.powf(s) * gamma(0.5 + s) / (PI.sqrt() * gamma(1.0 - s));
    2.0 * a / c
}

/// `(1 − x²)^s` on `(−1, 1)`.
pub fn torsion_exact(x: f64, s: f64) -> f64 {
    (1.0 - x * x).max(0.0).powf(s)
}

/// Torsion setup on `(−1, 1)` with `n` nodes: `G = Power(2)`, `f ≡ 0`,
/// `β = 0` and `k ≡ torsion_forcing(s)`.
pub fn torsion_spec(n: usize, s: f64) -> Result<ProblemSpec> {
    let mesh = Mesh::new(-1.0, 1.0, n)?;
    ProblemSpec::new(
        NFunction::power(2.0)?,
        s,
        0.5,
        0.0,
        GridFunction::zeros(mesh),
        GridFunction::constant(mesh, torsion_forcing(s))?,
    )
}

/// Relative discrete `L²` distance to `(1 − x²)^s`.
pub fn torsion_error(u: &GridFunction, s: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, v) in u.mesh().nodes().into_iter().zip(u.values()) {
        let e = torsion_exact(x, s);
        num += (v - e) * (v - e);
        den += e * e;
    }
    (num / den).sqrt()
}

/// Minimize the torsion energy on `n` nodes and return the solution with its
/// relative `L²` error. The forcing does not depend on `u`, so a single
/// `ε` stage suffices.
pub fn solve_torsion(n: usize, s: f64, opts: SolverOptions) -> Result<(SolveResult, f64)> {
    let spec = torsion_spec(n, s)?;
    let r = minimize_j(&spec, spec.epsilon_min, &GridFunction::zeros(*spec.mesh()), opts)?;
    let err = torsion_error(&r.u, s);
    Ok((r, err))
}
