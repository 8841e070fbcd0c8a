//! Modulars, Luxemburg norms and the Hölder / Poincaré checks.

use super::{GridFunction, Mesh, PairKernel};
use crate::error::{Error, Result};
use crate::nfunction::{NFunction, YoungFunction};
use crate::reduce::pairwise_sum;
use crate::sampling::{fourier_bump, stream};

/// Integration domain of the Gagliardo-type modular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgDomain {
    /// `Ω × Ω` only.
    OmegaOmega,
    /// `ℝ × ℝ` with `u = 0` off `Ω` (exterior part via the tail primitive).
    FullSpace,
}

/// `h Σ_i G(|u_i|)`.
pub fn modular_g<F: YoungFunction + ?Sized>(u: &GridFunction, g: &F) -> f64 {
    let parts: Vec<f64> = u.values().iter().map(|v| g.value(v.abs())).collect();
    u.mesh().h() * pairwise_sum(&parts)
}

/// Discrete `Φ_{s,G}(u)` over `Ω × Ω` or all of `ℝ × ℝ`.
pub fn modular_sg(u: &GridFunction, g: &NFunction, s: f64, domain: SgDomain) -> Result<f64> {
    let kernel = PairKernel::new(u.mesh(), s)?;
    Ok(modular_sg_with(&kernel, u.values(), g, domain))
}

pub(crate) fn modular_sg_with(kernel: &PairKernel, u: &[f64], g: &NFunction, domain: SgDomain) -> f64 {
    let inner = kernel.interior_modular(g, u);
    match domain {
        SgDomain::OmegaOmega => inner,
        SgDomain::FullSpace => inner + kernel.exterior_modular(g, u),
    }
}

/// Upper bound on the exterior mass beyond the tail radius `R ≥ 1`:
/// `2h Σ_i 2·G(|u_i|) R^{−s p⁻} / (s p⁻)`.
pub fn tail_remainder_bound(u: &GridFunction, g: &NFunction, s: f64) -> f64 {
    let r = u.mesh().tail_radius();
    let decay = r.powf(-s * g.p_minus()).max(r.powf(-s * g.p_plus()));
    let parts: Vec<f64> = u.values().iter().map(|v| g.value(v.abs())).collect();
    2.0 * u.mesh().h() * 2.0 * pairwise_sum(&parts) * decay / (s * g.p_minus())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Luxemburg {
    pub norm: f64,
    /// `|modular(u/λ) − 1|` at the returned `λ`.
    pub residual: f64,
}

/// `inf{λ > 0 : modular(1/λ) ≤ 1}` where `modular(c)` evaluates the modular
/// of `c·u`.
///
/// Safeguarded secant iteration on `ln λ ↦ ln modular(1/λ)` inside a
/// maintained bracket, with bisection whenever the secant step leaves the
/// bracket or stalls. `zero` signals `u ≡ 0`.
pub fn luxemburg_norm<M: Fn(f64) -> f64>(modular: M, zero: bool, upper_guess: f64) -> Result<Luxemburg> {
    if zero {
        return Ok(Luxemburg {
            norm: 0.0,
            residual: 0.0,
        });
    }
    let phi = |lam: f64| modular(1.0 / lam);
    let mut lo = 1e-12_f64;
    let mut hi = upper_guess.max(1.0);
    let mut f_lo = phi(lo);
    let mut k = 0;
    while f_lo.is_infinite() && lo < hi {
        lo *= 10.0;
        f_lo = phi(lo);
    }
    while !(f_lo > 1.0) {
        lo *= 1e-3;
        f_lo = phi(lo);
        k += 1;
        if k > 100 || lo == 0.0 {
            return Err(Error::Internal("Luxemburg bracket: modular never exceeds 1".into()));
        }
    }
    let mut f_hi = phi(hi);
    k = 0;
    while f_hi > 1.0 {
        hi *= 2.0;
        f_hi = phi(hi);
        k += 1;
        if k > crate::roots::MAX_DOUBLINGS {
            return Err(Error::Internal("Luxemburg bracket: modular never drops to 1".into()));
        }
    }
    if f_hi == 1.0 {
        return Ok(Luxemburg { norm: hi, residual: 0.0 });
    }
    let (mut x_lo, mut x_hi) = (lo.ln(), hi.ln());
    let (mut y_lo, mut y_hi) = (f_lo.ln(), f_hi.ln());
    let mut side = 0i32;
    for _ in 0..400 {
        if y_lo <= y_hi {
            return Err(Error::Internal(format!(
                "modular not decreasing in λ on [{}, {}]",
                x_lo.exp(),
                x_hi.exp()
            )));
        }
        let width = x_hi - x_lo;
        if width <= 4.0 * f64::EPSILON * x_lo.abs().max(x_hi.abs()).max(1.0) {
            break;
        }
        // Illinois-modified regula falsi
        let mut x = x_lo + y_lo * (x_hi - x_lo) / (y_lo - y_hi);
        if !(x > x_lo && x < x_hi) {
            x = 0.5 * (x_lo + x_hi);
        }
        let f = phi(x.exp());
        if !f.is_finite() {
            return Err(Error::Internal("modular not finite".into()));
        }
        if f == 1.0 {
            return Ok(Luxemburg {
                norm: x.exp(),
                residual: 0.0,
            });
        }
        let y = f.ln();
        if y > 0.0 {
            x_lo = x;
            y_lo = y;
            if side == -1 {
                y_hi *= 0.5;
            }
            side = -1;
        } else {
            x_hi = x;
            y_hi = y;
            if side == 1 {
                y_lo *= 0.5;
            }
            side = 1;
        }
    }
    let norm = x_hi.exp();
    Ok(Luxemburg {
        norm,
        residual: (phi(norm) - 1.0).abs(),
    })
}

fn upper_guess(u: &GridFunction) -> f64 {
    u.sup_norm() * u.mesh().length()
}

/// `‖u‖_{L^G(Ω)}`.
pub fn lg_norm<F: YoungFunction + ?Sized>(u: &GridFunction, g: &F) -> Result<Luxemburg> {
    let h = u.mesh().h();
    luxemburg_norm(
        |c| {
            let parts: Vec<f64> = u.values().iter().map(|v| g.value((c * v).abs())).collect();
            h * pairwise_sum(&parts)
        },
        u.is_zero(),
        upper_guess(u),
    )
}

/// `[u]_{s,G}` on `Ω × Ω` or `ℝ × ℝ`.
pub fn seminorm(u: &GridFunction, g: &NFunction, s: f64, domain: SgDomain) -> Result<Luxemburg> {
    let kernel = PairKernel::new(u.mesh(), s)?;
    let values = u.values();
    let zero = match domain {
        SgDomain::OmegaOmega => values.iter().all(|&v| v == values[0]),
        SgDomain::FullSpace => u.is_zero(),
    };
    luxemburg_norm(
        |c| {
            let scaled: Vec<f64> = values.iter().map(|v| c * v).collect();
            modular_sg_with(&kernel, &scaled, g, domain)
        },
        zero,
        upper_guess(u).max(1.0) * u.mesh().h().powf(-s),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `h Σ u_i v_i ≤ 2 ‖u‖_G ‖v‖_{G̅}`.
pub fn holder_pairing_check<G, C>(u: &GridFunction, v: &GridFunction, g: &G, g_bar: &C) -> Result<HolderCheck>
where
    G: YoungFunction + ?Sized,
    C: YoungFunction + ?Sized,
{
    let prods: Vec<f64> = u.values().iter().zip(v.values()).map(|(a, b)| a * b).collect();
    let lhs = u.mesh().h() * pairwise_sum(&prods);
    let rhs = 2.0 * lg_norm(u, g)?.norm * lg_norm(v, g_bar)?.norm;
    Ok(HolderCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-8 * (1.0 + rhs),
    })
}

/// Running maxima of `Φ_G(u) / Φ_{s,G}^{full}(u)` over seeded random sine
/// bumps; the last entry is the estimate.
pub fn poincare_constant_estimate(g: &NFunction, s: f64, mesh: &Mesh, samples: usize, seed: u64) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let kernel = PairKernel::new(mesh, s)?;
    let mut rng = stream(seed, &["poincare"], 0);
    let mut best = 0.0_f64;
    let mut running = Vec::with_capacity(samples);
    for _ in 0..samples {
        let u = fourier_bump(mesh, &mut rng);
        let den = modular_sg_with(&kernel, u.values(), g, SgDomain::FullSpace);
        assert!(den > 0.0, "nonzero function with zero full-space modular");
        best = best.max(modular_g(&u, g) / den);
        running.push(best);
    }
    Ok(running)
}
