//! `J_ε` and its gradient.

use super::ProblemSpec;
use crate::error::Result;
use crate::grid::{GridFunction, PairKernel};
use crate::quadrature::integrate;
use crate::reduce::pairwise_sum;

/// `∫₀ʷ f (t+ε)^{−α} + k (t+ε)^β dt` in closed form, written with
/// `expm1`/`ln_1p` to avoid cancellation for `w ≪ ε`.
pub fn primitive_singular(f: f64, k: f64, alpha: f64, beta: f64, eps: f64, w: f64) -> f64 {
    let l = (w / eps).ln_1p();
    let mut out = 0.0;
    if f != 0.0 {
        out += if alpha == 1.0 {
            f * l
        } else {
            let e = 1.0 - alpha;
            f * eps.powf(e) * (e * l).exp_m1() / e
        };
    }
    if k != 0.0 {
        let e = 1.0 + beta;
        out += k * eps.powf(e) * (e * l).exp_m1() / e;
    }
    out
}

/// `J_ε` assembled for one problem and one `ε`.
pub struct Energy<'a> {
    spec: &'a ProblemSpec,
    kernel: PairKernel,
    eps: f64,
    xs: Vec<f64>,
}

impl<'a> Energy<'a> {
    pub fn new(spec: &'a ProblemSpec, eps: f64) -> Result<Self> {
        let kernel = PairKernel::new(spec.mesh(), spec.s)?;
        Ok(Energy {
            spec,
            xs: spec.mesh().nodes(),
            kernel,
            eps,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    pub fn kernel(&self) -> &PairKernel {
        &self.kernel
    }

    /// `𝔾_ε(x_i, w)`.
    fn primitive(&self, i: usize, w: f64) -> f64 {
        let sp = self.spec;
        match &sp.custom {
            None => primitive_singular(sp.f.at(i), sp.k.at(i), sp.alpha, sp.beta, self.eps, w),
            Some(nl) => {
                if w == 0.0 {
                    return 0.0;
                }
                let x = self.xs[i];
                integrate(|t| nl.eval(x, t + self.eps), 0.0, w, 0.0, 1e-14, 200).value
            }
        }
    }

    /// `∂_w 𝔾_ε(x_i, w)`.
    fn source(&self, i: usize, w: f64) -> f64 {
        let sp = self.spec;
        match &sp.custom {
            None => {
                let z = w + self.eps;
                let (f, k) = (sp.f.at(i), sp.k.at(i));
                let mut out = 0.0;
                if f != 0.0 {
                    out += f * z.powf(-sp.alpha);
                }
                if k != 0.0 {
                    out += k * z.powf(sp.beta);
                }
                out
            }
            Some(nl) => nl.eval(self.xs[i], w + self.eps),
        }
    }

    pub fn value(&self, u: &[f64]) -> f64 {
        let g = &self.spec.g;
        let modular = self.kernel.interior_modular(g, u) + self.kernel.exterior_modular(g, u);
        let parts: Vec<f64> = (0..u.len()).map(|i| self.primitive(i, u[i])).collect();
        modular - self.kernel.mesh().h() * pairwise_sum(&parts)
    }

    pub fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let h = self.kernel.mesh().h();
        let mut grad = self.kernel.gradient(&self.spec.g, u);
        for (i, gi) in grad.iter_mut().enumerate() {
            *gi -= h * self.source(i, u[i]);
        }
        grad
    }
}

/// `J_ε(u)`.
pub fn energy_j(u: &GridFunction, spec: &ProblemSpec, epsilon: f64) -> Result<f64> {
    Ok(Energy::new(spec, epsilon)?.value(u.values()))
}

/// `∂J_ε/∂u_i`: the discrete weak form of `(−Δ)_g^s u − f(u+ε)^{−α} − k(u+ε)^β`
/// tested against the cell indicator of node `i`.
pub fn weak_residual(u: &GridFunction, spec: &ProblemSpec, epsilon: f64) -> Result<GridFunction> {
    let grad = Energy::new(spec, epsilon)?.gradient(u.values());
    GridFunction::new(*u.mesh(), grad)
}
