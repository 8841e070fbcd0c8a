//! The class FC and the monotonicity condition on general nonlinearities.

use crate::interp::log_grid;

/// A candidate `Ψ` with its derivative.
pub struct FCFunction {
    pub psi: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub psi_prime: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl FCFunction {
    pub fn new(
        psi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        psi_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FCFunction {
            psi: Box::new(psi),
            psi_prime: Box::new(psi_prime),
        }
    }

    /// `Ψ(x) = x^γ`.
    pub fn power(gamma: f64) -> Self {
        Self::new(move |x| x.powf(gamma), move |x| gamma * x.powf(gamma - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcReport {
    pub theta1: f64,
    pub theta2: f64,
    pub ok: bool,
}

/// Default sample points: 400 log-spaced points on `[1e-4, 1e4]`.
pub fn default_fc_samples() -> Vec<f64> {
    log_grid(1e-4, 1e4, 400)
}

/// `θ₁ = inf x Ψ'/Ψ`, `θ₂ = sup x Ψ'/Ψ`; `ok` when `θ₁ ≥ 0`, `Ψ'` increases
/// and `Ψ` is convex on the samples.
pub fn fc_check(psi: &FCFunction, samples: &[f64]) -> FcReport {
    let mut xs: Vec<f64> = samples.iter().copied().filter(|&x| x > 0.0).collect();
    xs.sort_by(f64::total_cmp);
    let vals: Vec<f64> = xs.iter().map(|&x| (psi.psi)(x)).collect();
    let ders: Vec<f64> = xs.iter().map(|&x| (psi.psi_prime)(x)).collect();
    let mut theta1 = f64::INFINITY;
    let mut theta2 = f64::NEG_INFINITY;
    let mut ok = !xs.is_empty();
    for k in 0..xs.len() {
        let r = xs[k] * ders[k] / vals[k];
        if !r.is_finite() || !(vals[k] > 0.0) {
            ok = false;
            continue;
        }
        theta1 = theta1.min(r);
        theta2 = theta2.max(r);
    }
    ok &= theta1 >= 0.0;
    ok &= ders.windows(2).all(|w| w[1] > w[0]);
    for k in 0..xs.len().saturating_sub(2) {
        let s0 = (vals[k + 1] - vals[k]) / (xs[k + 1] - xs[k]);
        let s1 = (vals[k + 2] - vals[k + 1]) / (xs[k + 2] - xs[k + 1]);
        ok &= s1 >= s0 * (1.0 - 1e-12);
    }
    FcReport { theta1, theta2, ok }
}

/// `s ↦ F(x, s)/s^{p⁻−1}` nonincreasing on `s_grid` for every sampled `x`,
/// with slack `1e-10` relative.
pub fn f2_monotonicity_check<F: Fn(f64, f64) -> f64>(f: F, x_samples: &[f64], s_grid: &[f64], p_minus: f64) -> bool {
    let mut ss: Vec<f64> = s_grid.iter().copied().filter(|&s| s > 0.0).collect();
    ss.sort_by(f64::total_cmp);
    x_samples.iter().all(|&x| {
        let ratios: Vec<f64> = ss.iter().map(|&s| f(x, s) / s.powf(p_minus - 1.0)).collect();
        ratios.iter().all(|r| r.is_finite()) && ratios.windows(2).all(|w| w[1] <= w[0] + 1e-10 * w[0].abs().max(w[1].abs()))
    })
}
