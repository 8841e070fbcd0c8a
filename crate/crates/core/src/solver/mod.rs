//! The regularized singular problem and its experiments.
//!
//! For `ε > 0` the discrete energy is
//!
//! `J_ε(u) = Φ_{s,G}(u) − h Σ_i 𝔾_ε(x_i, u_i)`,
//!
//! with `Φ_{s,G}` the full-space modular of [`crate::grid`] and
//! `𝔾_ε(x, w) = ∫₀ʷ f(x)(t+ε)^{−α} + k(x)(t+ε)^β dt`. It is minimized over the
//! box `0 ≤ u ≤ ū` by projected gradient descent, and `ε` is halved from
//! `ε₀` to `ε_min` with warm starts.

mod energy;
mod experiments;
mod minimize;
mod torsion;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::nfunction::NFunction;

pub use energy::{energy_j, primitive_singular, weak_residual, Energy};
pub use experiments::{
    comparison_experiment, membership_checks, solve_general, symmetry_experiment, uniqueness_experiment,
    Comparison, Symmetry, Uniqueness, SYMMETRY_THRESHOLD, UNIQUENESS_THRESHOLD,
};
pub use minimize::{epsilon_schedule, minimize_j, solve_singular, SolverOptions};
pub use torsion::{solve_torsion, torsion_error, torsion_exact, torsion_forcing, torsion_spec};

/// A user-supplied right-hand side `F(x, u)`.
#[derive(Clone)]
pub struct Nonlinearity {
    label: String,
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl Nonlinearity {
    pub fn new(label: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Nonlinearity {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, x: f64, u: f64) -> f64 {
        (self.f)(x, u)
    }
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nonlinearity({})", self.label)
    }
}

/// Data of the singular problem on a mesh.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub g: NFunction,
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub f: GridFunction,
    pub k: GridFunction,
    pub epsilon0: f64,
    pub epsilon_min: f64,
    pub obstacle: Option<GridFunction>,
    /// Replaces `f u^{−α} + k u^β` when present.
    pub custom: Option<Nonlinearity>,
}

impl ProblemSpec {
    /// Spec with `ε₀ = 0.1`, `ε_min = 1e-6` and no obstacle.
    pub fn new(g: NFunction, s: f64, alpha: f64, beta: f64, f: GridFunction, k: GridFunction) -> Result<Self> {
        let spec = ProblemSpec {
            g,
            s,
            alpha,
            beta,
            f,
            k,
            epsilon0: 0.1,
            epsilon_min: 1e-6,
            obstacle: None,
            custom: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_epsilons(mut self, epsilon0: f64, epsilon_min: f64) -> Result<Self> {
        self.epsilon0 = epsilon0;
        self.epsilon_min = epsilon_min;
        self.validate()?;
        Ok(self)
    }

    pub fn with_obstacle(mut self, obstacle: GridFunction) -> Result<Self> {
        self.obstacle = Some(obstacle);
        self.validate()?;
        Ok(self)
    }

    pub fn with_custom(mut self, custom: Nonlinearity) -> Self {
        self.custom = Some(custom);
        self
    }

    pub fn mesh(&self) -> &crate::grid::Mesh {
        self.f.mesh()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(Error::InvalidParameter(format!("s = {} must lie in (0,1)", self.s)));
        }
        if !(self.alpha >= 0.0 && self.beta >= 0.0 && self.alpha.is_finite() && self.beta.is_finite()) {
            return Err(Error::InvalidParameter("alpha and beta must be finite and >= 0".into()));
        }
        if !(self.epsilon_min > 0.0 && self.epsilon0 >= self.epsilon_min && self.epsilon0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need epsilon0 >= epsilon_min > 0, got {} and {}",
                self.epsilon0, self.epsilon_min
            )));
        }
        if self.f.mesh() != self.k.mesh() {
            return Err(Error::InvalidParameter("f and k live on different meshes".into()));
        }
        if self.f.values().iter().chain(self.k.values()).any(|&v| v < 0.0) {
            return Err(Error::InvalidParameter("f and k must be nonnegative".into()));
        }
        if let Some(ob) = &self.obstacle {
            if ob.mesh() != self.f.mesh() || ob.values().iter().any(|&v| v < 0.0) {
                return Err(Error::InvalidParameter("obstacle must be nonnegative on the same mesh".into()));
            }
        }
        Ok(())
    }

    /// Departures from the standing assumptions (reported, never fatal).
    pub fn hypothesis_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.custom.is_some() {
            return out;
        }
        if self.f.is_zero() {
            out.push("out-of-hypothesis: f is identically zero".into());
        }
        if self.k.values().iter().any(|&v| v <= 0.0) {
            out.push("out-of-hypothesis: k is not strictly positive".into());
        }
        if self.beta == 0.0 {
            out.push("out-of-hypothesis: beta = 0".into());
        }
        if self.alpha == 0.0 {
            out.push("out-of-hypothesis: alpha = 0".into());
        }
        if self.beta >= self.g.p_minus() - 1.0 {
            out.push(format!(
                "out-of-hypothesis: beta = {} >= p- - 1 = {}",
                self.beta,
                self.g.p_minus() - 1.0
            ));
        }
        out
    }
}

/// One stage of the `ε` continuation.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonStage {
    pub epsilon: f64,
    pub iterations: usize,
    pub energy: f64,
    pub residual_inf: f64,
    pub converged: bool,
    /// `‖u_ε − u_{previous ε}‖_∞`; absent for the first stage.
    pub cauchy_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub u: GridFunction,
    /// `(global iteration, J_ε)` after each accepted step.
    pub energy_trace: Vec<(usize, f64)>,
    /// Projected-gradient sup norm at the returned `u`.
    pub residual_inf: f64,
    pub epsilon_trace: Vec<EpsilonStage>,
    pub converged: bool,
    pub warnings: Vec<String>,
}

impl SolveResult {
    /// Last recorded Cauchy gap of the continuation.
    pub fn last_cauchy_gap(&self) -> f64 {
        self.epsilon_trace.iter().rev().find_map(|s| s.cauchy_gap).unwrap_or(0.0)
    }

    /// Plain-text dump of the convergence statistics.
    pub fn stats_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "converged={}", self.converged);
        let _ = writeln!(out, "residual_inf={:e}", self.residual_inf);
        let _ = writeln!(out, "iterations={}", self.energy_trace.last().map_or(0, |e| e.0));
        for st in &self.epsilon_trace {
            let _ = writeln!(
                out,
                "stage epsilon={:e} iterations={} energy={:e} residual_inf={:e} converged={} cauchy_gap={}",
                st.epsilon,
                st.iterations,
                st.energy,
                st.residual_inf,
                st.converged,
                st.cauchy_gap.map_or("-".to_string(), |g| format!("{g:e}"))
            );
        }
        out
    }
}

#[cfg(test)]
mod tests;
