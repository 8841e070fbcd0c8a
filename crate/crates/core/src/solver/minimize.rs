//! Projected gradient descent and `ε` continuation.

use super::energy::Energy;
use super::{EpsilonStage, ProblemSpec, SolveResult};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::reduce::pairwise_sum;

/// Armijo sufficient-decrease constant.
const ARMIJO_C: f64 = 1e-4;
const POWER_ITERATIONS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Bound on the sup norm of the projected gradient.
    pub tol: f64,
    /// Iterations per `ε` stage; `None` means `50·n`.
    pub max_iter: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-9,
            max_iter: None,
        }
    }
}

fn clamp_node(v: f64, upper: Option<f64>) -> f64 {
    let v = v.max(0.0);
    match upper {
        Some(ub) => v.min(ub),
        None => v,
    }
}

fn project(u: &mut [f64], obstacle: Option<&[f64]>) {
    for (i, v) in u.iter_mut().enumerate() {
        *v = clamp_node(*v, obstacle.map(|o| o[i]));
    }
}

/// `‖u − Π(u − ∇J)‖_∞`.
fn projected_residual(u: &[f64], grad: &[f64], obstacle: Option<&[f64]>) -> f64 {
    (0..u.len()).fold(0.0, |m, i| {
        let p = clamp_node(u[i] - grad[i], obstacle.map(|o| o[i]));
        m.max((u[i] - p).abs())
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let prods: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    pairwise_sum(&prods)
}

/// Largest Hessian eigenvalue at `u` by power iteration on finite-difference
/// Hessian–vector products.
fn lipschitz_estimate(energy: &Energy, u: &[f64], grad: &[f64]) -> f64 {
    let n = u.len();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let delta = 1e-4 * u.iter().fold(1e-2_f64, |m, x| m.max(x.abs()));
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let shifted: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + delta * b).collect();
        let hv: Vec<f64> = energy
            .gradient(&shifted)
            .iter()
            .zip(grad)
            .map(|(a, b)| (a - b) / delta)
            .collect();
        let norm = dot(&hv, &hv).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            break;
        }
        lambda = norm;
        v = hv.into_iter().map(|x| x / norm).collect();
    }
    lambda
}

struct Stage {
    u: Vec<f64>,
    iterations: usize,
    energy: f64,
    residual: f64,
    converged: bool,
}

fn run_stage(
    energy: &Energy,
    start: &[f64],
    obstacle: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
    offset: usize,
    trace: &mut Vec<(usize, f64)>,
) -> Stage {
    let mut u = start.to_vec();
    project(&mut u, obstacle);
    let mut grad = energy.gradient(&u);
    let mut j = energy.value(&u);
    let l_hat = lipschitz_estimate(energy, &u, &grad);
    let eta0 = if l_hat > 0.0 { 1.0 / l_hat } else { 1.0 };
    let mut eta = eta0;
    let mut residual = projected_residual(&u, &grad, obstacle);
    let mut iterations = 0;
    while residual >= tol && iterations < max_iter {
        let slack = 1e-12 * j.abs().max(1.0);
        let mut step = eta;
        let accepted = loop {
            let mut trial: Vec<f64> = u.iter().zip(&grad).map(|(a, g)| a - step * g).collect();
            project(&mut trial, obstacle);
            let d: Vec<f64> = trial.iter().zip(&u).map(|(a, b)| a - b).collect();
            if d.iter().all(|&x| x == 0.0) {
                break None;
            }
            let jt = energy.value(&trial);
            if jt <= j + ARMIJO_C * dot(&grad, &d) + slack {
                break Some((trial, d, jt));
            }
            step *= 0.5;
            if step < eta0 * 1e-14 {
                break None;
            }
        };
        let Some((trial, d, jt)) = accepted else {
            break;
        };
        let grad_new = energy.gradient(&trial);
        let y: Vec<f64> = grad_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&d, &y);
        // Barzilai–Borwein trial step for the next iteration
        eta = if sy > 0.0 { dot(&d, &d) / sy } else { 2.0 * step };
        eta = eta.clamp(eta0 * 1e-3, eta0 * 1e6);
        u = trial;
        grad = grad_new;
        j = jt;
        iterations += 1;
        trace.push((offset + iterations, j));
        residual = projected_residual(&u, &grad, obstacle);
    }
    Stage {
        u,
        iterations,
        energy: j,
        residual,
        converged: residual < tol,
    }
}

fn check_init(spec: &ProblemSpec, u_init: &GridFunction) -> Result<()> {
    if u_init.mesh() != spec.mesh() {
        return Err(Error::InvalidParameter("initial guess lives on a different mesh".into()));
    }
    Ok(())
}

/// Minimize `J_ε` over `0 ≤ u ≤ ū` from `u_init` at a single `ε`.
pub fn minimize_j(spec: &ProblemSpec, epsilon: f64, u_init: &GridFunction, opts: SolverOptions) -> Result<SolveResult> {
    spec.validate()?;
    check_init(spec, u_init)?;
    let energy = Energy::new(spec, epsilon)?;
    let max_iter = opts.max_iter.unwrap_or(50 * spec.mesh().n());
    let obstacle = spec.obstacle.as_ref().map(|o| o.values());
    let mut trace = Vec::new();
    let st = run_stage(&energy, u_init.values(), obstacle, opts.tol, max_iter, 0, &mut trace);
    Ok(SolveResult {
        u: GridFunction::new(*spec.mesh(), st.u)?.with_label("u"),
        energy_trace: trace,
        residual_inf: st.residual,
        epsilon_trace: vec![EpsilonStage {
            epsilon,
            iterations: st.iterations,
            energy: st.energy,
            residual_inf: st.residual,
            converged: st.converged,
            cauchy_gap: None,
        }],
        converged: st.converged,
        warnings: spec.hypothesis_warnings(),
    })
}

/// `ε` schedule `ε₀, ε₀/2, …` ending exactly at `ε_min`.
pub fn epsilon_schedule(epsilon0: f64, epsilon_min: f64) -> Vec<f64> {
    let mut out = vec![epsilon0];
    let mut e = epsilon0;
    while e > epsilon_min {
        e = (e * 0.5).max(epsilon_min);
        out.push(e);
    }
    out
}

/// Whether the last three Cauchy gaps are non-increasing, up to a floor of
/// `1e-8·(1 + ‖u‖_∞)` below which gaps are treated as converged noise.
fn cauchy_settled(gaps: &[f64], scale: f64) -> bool {
    let floor = 1e-8 * (1.0 + scale);
    let tail = &gaps[gaps.len().saturating_sub(3)..];
    tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-6) + floor)
}

/// Minimize `J_ε` along the continuation `ε₀ → ε_min`, warm starting each
/// stage from the previous minimizer.
pub fn solve_singular(spec: &ProblemSpec, u_init: &GridFunction, opts: SolverOptions) -> Result<SolveResult> {
    spec.validate()?;
    check_init(spec, u_init)?;
    let max_iter = opts.max_iter.unwrap_or(50 * spec.mesh().n());
    let obstacle = spec.obstacle.as_ref().map(|o| o.values());
    let mut trace = Vec::new();
    let mut stages = Vec::new();
    let mut gaps = Vec::new();
    let mut u = u_init.values().to_vec();
    let mut all_converged = true;
    let mut last = None;
    for eps in epsilon_schedule(spec.epsilon0, spec.epsilon_min) {
        let energy = Energy::new(spec, eps)?;
        let st = run_stage(&energy, &u, obstacle, opts.tol, max_iter, trace.len(), &mut trace);
        let gap = last.map(|_| u.iter().zip(&st.u).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())));
        if let Some(gp) = gap {
            gaps.push(gp);
        }
        all_converged &= st.converged;
        stages.push(EpsilonStage {
            epsilon: eps,
            iterations: st.iterations,
            energy: st.energy,
            residual_inf: st.residual,
            converged: st.converged,
            cauchy_gap: gap,
        });
        last = Some(st.residual);
        u = st.u;
    }
    let sup = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let settled = cauchy_settled(&gaps, sup);
    let mut warnings = spec.hypothesis_warnings();
    if !settled {
        warnings.push("continuation: Cauchy gaps not decreasing over the last three stages".into());
    }
    Ok(SolveResult {
        u: GridFunction::new(*spec.mesh(), u)?.with_label("u"),
        energy_trace: trace,
        residual_inf: last.unwrap_or(f64::NAN),
        epsilon_trace: stages,
        converged: all_converged && settled,
        warnings,
    })
}
