//! Comparison, uniqueness and symmetry experiments.

use super::minimize::{solve_singular, SolverOptions};
use super::{ProblemSpec, SolveResult};
use crate::error::{Error, Result};
use crate::grid::{lg_norm, GridFunction};
use crate::interp::log_grid;
use crate::lab::f2_monotonicity_check;
use crate::nfunction::{complementary, frak_f, k_function, sobolev_conjugate, YoungFunction, DEFAULT_TABLE_POINTS};

/// Bound on the normalized pairwise distance in the uniqueness experiment.
pub const UNIQUENESS_THRESHOLD: f64 = 1e-5;

/// Bound on the reflection asymmetry in the symmetry experiment.
pub const SYMMETRY_THRESHOLD: f64 = 1e-6;

fn sup_dist(a: &GridFunction, b: &GridFunction) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Norms of the coefficients in the spaces of the standing assumptions.
///
/// Advisory only: every discretized coefficient has finite norm, so the
/// output is a list of notes. When the Sobolev conjugate does not exist the
/// checks are skipped with the reason.
pub fn membership_checks(spec: &ProblemSpec) -> Vec<String> {
    let mut out = Vec::new();
    let g_star = match sobolev_conjugate(&spec.g, spec.s, 1) {
        Ok(gs) => gs,
        Err(e) => {
            out.push(format!("membership checks skipped: {e}"));
            return out;
        }
    };
    let mut norm_of = |name: &str, space: &str, u: &GridFunction, table: Result<crate::nfunction::DerivedNFunction>| {
        let msg = table
            .and_then(|d| complementary(&d, DEFAULT_TABLE_POINTS))
            .and_then(|c| lg_norm(u, &c))
            .map(|l| format!("{name} in {space}: norm {:e}", l.norm))
            .unwrap_or_else(|e| format!("{name} in {space}: not computed ({e})"));
        out.push(msg);
    };
    norm_of("k", "L^{conj K}", &spec.k, k_function(&g_star, spec.beta));
    if spec.alpha < 1.0 {
        norm_of("f", "L^{conj F}", &spec.f, frak_f(&g_star, spec.alpha));
    } else if spec.alpha == 1.0 {
        norm_of("f", "L^{conj G*}", &spec.f, Ok(g_star.clone()));
    } else {
        let l1: f64 = spec.f.values().iter().map(|v| v.abs()).sum::<f64>() * spec.mesh().h();
        out.push(format!("f in L^1: norm {l1:e}"));
    }
    out
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub low: SolveResult,
    pub high: SolveResult,
    /// Nodes with `u_low > u_high + tol_cmp`.
    pub violated_nodes: Vec<usize>,
    pub tol_cmp: f64,
    /// Either solve failed to converge.
    pub inconclusive: bool,
    pub notes: Vec<String>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        !self.inconclusive && self.violated_nodes.is_empty()
    }
}

fn same_problem(a: &ProblemSpec, b: &ProblemSpec) -> bool {
    a.g.label() == b.g.label()
        && a.s == b.s
        && a.alpha == b.alpha
        && a.beta == b.beta
        && a.epsilon0 == b.epsilon0
        && a.epsilon_min == b.epsilon_min
        && a.mesh() == b.mesh()
        && a.obstacle == b.obstacle
}

/// Solve with ordered data `f_low ≤ f_high`, `k_low ≤ k_high` and look for
/// nodes where the solutions are out of order.
///
/// `tol_cmp = 10·(tol/h + last Cauchy gap of either continuation)`: the
/// projected-gradient bound converted to an operator residual plus the
/// remaining `ε` drift.
pub fn comparison_experiment(
    low: &ProblemSpec,
    high: &ProblemSpec,
    u_init: &GridFunction,
    opts: SolverOptions,
) -> Result<Comparison> {
    if !same_problem(low, high) {
        return Err(Error::InvalidParameter("comparison specs differ beyond f and k".into()));
    }
    let ordered = |a: &GridFunction, b: &GridFunction| a.values().iter().zip(b.values()).all(|(x, y)| x <= y);
    if !ordered(&low.f, &high.f) || !ordered(&low.k, &high.k) {
        return Err(Error::InvalidParameter("need f_low <= f_high and k_low <= k_high nodewise".into()));
    }
    let r_low = solve_singular(low, u_init, opts)?;
    let r_high = solve_singular(high, u_init, opts)?;
    let h = low.mesh().h();
    let tol_cmp = 10.0 * (opts.tol / h + r_low.last_cauchy_gap().max(r_high.last_cauchy_gap()));
    let violated_nodes = (0..low.mesh().n())
        .filter(|&i| r_low.u.at(i) > r_high.u.at(i) + tol_cmp)
        .collect();
    let mut notes = membership_checks(low);
    for n in membership_checks(high) {
        if !notes.contains(&n) {
            notes.push(n);
        }
    }
    Ok(Comparison {
        inconclusive: !(r_low.converged && r_high.converged),
        low: r_low,
        high: r_high,
        violated_nodes,
        tol_cmp,
        notes,
    })
}

#[derive(Debug, Clone)]
pub struct Uniqueness {
    pub results: Vec<SolveResult>,
    /// `max ‖u_a − u_b‖_∞ / (1 + ‖u_a‖_∞)` over pairs.
    pub max_distance: f64,
    /// `β ≥ p⁻ − 1`: the run is exploratory.
    pub out_of_hypothesis: bool,
    pub inconclusive: bool,
}

impl Uniqueness {
    pub fn passed(&self) -> bool {
        !self.inconclusive && self.max_distance < UNIQUENESS_THRESHOLD
    }
}

/// Solve from every initial guess and measure the spread of the solutions.
pub fn uniqueness_experiment(spec: &ProblemSpec, inits: &[GridFunction], opts: SolverOptions) -> Result<Uniqueness> {
    if inits.len() < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 initial guesses, got {}", inits.len())));
    }
    for a in 0..inits.len() {
        for b in a + 1..inits.len() {
            if inits[a].values() == inits[b].values() {
                return Err(Error::InvalidParameter(format!("initial guesses {a} and {b} coincide")));
            }
        }
    }
    let results = inits
        .iter()
        .map(|u0| solve_singular(spec, u0, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut max_distance = 0.0_f64;
    for a in 0..results.len() {
        for b in 0..results.len() {
            if a != b {
                let d = sup_dist(&results[a].u, &results[b].u) / (1.0 + results[a].u.sup_norm());
                max_distance = max_distance.max(d);
            }
        }
    }
    Ok(Uniqueness {
        inconclusive: results.iter().any(|r| !r.converged),
        out_of_hypothesis: spec.custom.is_none() && spec.beta >= spec.g.p_minus() - 1.0,
        results,
        max_distance,
    })
}

#[derive(Debug, Clone)]
pub struct Symmetry {
    pub result: SolveResult,
    /// `max_i |u_i − u_{n−1−i}|`.
    pub asymmetry: f64,
    /// Whether `n` is even and `f`, `k` are reflection symmetric.
    pub symmetric_data: bool,
}

impl Symmetry {
    pub fn passed(&self) -> bool {
        self.result.converged && self.asymmetry < SYMMETRY_THRESHOLD
    }
}

/// Solve and measure the reflection asymmetry about the midpoint of `Ω`.
pub fn symmetry_experiment(spec: &ProblemSpec, u_init: &GridFunction, opts: SolverOptions) -> Result<Symmetry> {
    let even = |u: &GridFunction| {
        let scale = u.sup_norm().max(f64::MIN_POSITIVE);
        sup_dist(u, &u.reflected()) <= 1e-14 * scale
    };
    let mut symmetric_data = spec.mesh().n().is_multiple_of(2) && even(&spec.f) && even(&spec.k);
    if let Some(ob) = &spec.obstacle {
        symmetric_data &= even(ob);
    }
    let result = solve_singular(spec, u_init, opts)?;
    let asymmetry = sup_dist(&result.u, &result.u.reflected());
    Ok(Symmetry {
        result,
        asymmetry,
        symmetric_data,
    })
}

/// Solve `(−Δ)_g^s u = F(x, u)` for the custom nonlinearity of `spec` after
/// checking `F ≥ 0` and that `F(x, s)/s^{p⁻−1}` is nonincreasing.
pub fn solve_general(spec: &ProblemSpec, u_init: &GridFunction, opts: SolverOptions) -> Result<SolveResult> {
    let Some(nl) = &spec.custom else {
        return Err(Error::InvalidParameter("solve_general needs a custom nonlinearity".into()));
    };
    let xs = spec.mesh().nodes();
    let ss = log_grid(1e-6, 1e6, 241);
    let f = |x: f64, s: f64| nl.eval(x, s);
    if xs.iter().any(|&x| ss.iter().any(|&s| !(f(x, s) >= 0.0))) {
        return Err(Error::Nonlinearity(format!("{} is negative or undefined somewhere", nl.label())));
    }
    if !f2_monotonicity_check(f, &xs, &ss, spec.g.p_minus()) {
        return Err(Error::Nonlinearity(format!(
            "{}: F(x,s)/s^(p- - 1) is not nonincreasing",
            nl.label()
        )));
    }
    solve_singular(spec, u_init, opts)
}
