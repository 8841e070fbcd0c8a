//! Pointwise gap functions: `rhs − lhs` of each inequality.

use crate::error::{Error, Result};
use crate::nfunction::{NFunction, YoungFunction};

/// Scale-aware violation tolerance `1e-8·(1 + |lhs| + |rhs|)`.
#[inline]
pub fn tolerance(lhs: f64, rhs: f64) -> f64 {
    1e-8 * (1.0 + lhs.abs() + rhs.abs())
}

/// `g(|a|)·a/|a|` with the value 0 at `a = 0`.
#[inline]
pub fn signed_g(g: &NFunction, a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        g.deriv(a.abs()).copysign(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub lhs: f64,
    pub rhs: f64,
}

impl Gap {
    pub fn gap(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn violated(&self) -> bool {
        self.gap() < -tolerance(self.lhs, self.rhs)
    }

    /// The more adverse of two gaps.
    pub fn worst(self, other: Gap) -> Gap {
        let scaled = |g: &Gap| g.gap() / (1.0 + g.lhs.abs() + g.rhs.abs());
        if scaled(&other) < scaled(&self) {
            other
        } else {
            self
        }
    }
}

pub(crate) fn check_q(g: &NFunction, q: f64) -> Result<()> {
    if !(q > 1.0 && q <= g.p_minus()) {
        return Err(Error::InvalidParameter(format!(
            "q = {q} must satisfy 1 < q <= p- = {}",
            g.p_minus()
        )));
    }
    Ok(())
}

/// Young: `a b ≤ G(a) + G̅(b)`.
pub fn young_gap<G, C>(g: &G, g_bar: &C, a: f64, b: f64) -> Gap
where
    G: YoungFunction + ?Sized,
    C: YoungFunction + ?Sized,
{
    Gap {
        lhs: a * b,
        rhs: g.value(a) + g_bar.value(b),
    }
}

/// Both sides of `min{λ^{p⁻}, λ^{p⁺}} G(t) ≤ G(λt) ≤ max{λ^{p⁻}, λ^{p⁺}} G(t)`;
/// returns the more adverse one.
pub fn scaling_gap(g: &NFunction, lambda: f64, t: f64) -> Gap {
    let a = lambda.powf(g.p_minus());
    let b = lambda.powf(g.p_plus());
    let base = g.value(t);
    let scaled = g.value(lambda * t);
    let lower = Gap {
        lhs: a.min(b) * base,
        rhs: scaled,
    };
    let upper = Gap {
        lhs: scaled,
        rhs: a.max(b) * base,
    };
    lower.worst(upper)
}

/// `(p⁻ − 1) G(t) ≤ G̅(g(t)) ≤ (p⁺ − 1) G(t)`.
pub fn conjugate_sandwich_gap<C: YoungFunction + ?Sized>(g: &NFunction, g_bar: &C, t: f64) -> Gap {
    let base = g.value(t);
    let conj = g_bar.value(g.deriv(t));
    let lower = Gap {
        lhs: (g.p_minus() - 1.0) * base,
        rhs: conj,
    };
    let upper = Gap {
        lhs: conj,
        rhs: (g.p_plus() - 1.0) * base,
    };
    lower.worst(upper)
}

/// `(g(|b|) sgn b − g(|a|) sgn a)(b − a)` and its ratio to `G(|b − a|)`.
pub fn monotone_difference_gap(g: &NFunction, a: f64, b: f64) -> (f64, Option<f64>) {
    if a == b {
        return (0.0, None);
    }
    let lhs = (signed_g(g, b) - signed_g(g, a)) * (b - a);
    (lhs, Some(lhs / g.value((b - a).abs())))
}

/// Hidden convexity of `G` along `σ_t = ((1−t) u₀^q + t u₁^q)^{1/q}` at a pair
/// of points `x, y`.
pub fn hidden_convexity_gap(g: &NFunction, q: f64, u0: (f64, f64), u1: (f64, f64), t: f64) -> Result<Gap> {
    check_q(g, q)?;
    if !(0.0..=1.0).contains(&t) || u0.0 < 0.0 || u0.1 < 0.0 || u1.0 < 0.0 || u1.1 < 0.0 {
        return Err(Error::InvalidParameter("need t in [0,1] and nonnegative values".into()));
    }
    let sigma = |a: f64, b: f64| {
        if t == 0.0 {
            a
        } else if t == 1.0 {
            b
        } else {
            ((1.0 - t) * a.powf(q) + t * b.powf(q)).powf(1.0 / q)
        }
    };
    let lhs = g.value((sigma(u0.0, u1.0) - sigma(u0.1, u1.1)).abs());
    let rhs = (1.0 - t) * g.value((u0.0 - u0.1).abs()) + t * g.value((u1.0 - u1.1).abs());
    Ok(Gap { lhs, rhs })
}

/// Which of the four `|Δu| ≷ 1`, `|Δv| ≷ 1` cases a tuple falls into:
/// bit 0 set for `|Δu| ≥ 1`, bit 1 for `|Δv| ≥ 1`.
pub fn picone_regime(u: (f64, f64), v: (f64, f64)) -> usize {
    usize::from((u.0 - u.1).abs() >= 1.0) | (usize::from((v.0 - v.1).abs() >= 1.0) << 1)
}

/// Uniform Picone constant `C = p⁺·G(1)`.
pub fn picone_constant(g: &NFunction) -> f64 {
    g.p_plus() * g.at_one()
}

/// Pointwise Picone inequality with the constant of [`picone_constant`].
pub fn picone_gap(g: &NFunction, q: f64, u: (f64, f64), v: (f64, f64)) -> Result<Gap> {
    check_q(g, q)?;
    if !(u.0 > 0.0 && u.1 > 0.0) || v.0 < 0.0 || v.1 < 0.0 {
        return Err(Error::InvalidParameter("need u > 0 and v >= 0".into()));
    }
    let du = u.0 - u.1;
    let bracket = v.0.powf(q) / u.0.powf(q - 1.0) - v.1.powf(q) / u.1.powf(q - 1.0);
    let lhs = signed_g(g, du) * bracket;
    let (pm, pp) = g.indices();
    let g1 = g.at_one();
    let rv = g.value((v.0 - v.1).abs()) / g1;
    let ru = g.value(du.abs()) / g1;
    let rhs = picone_constant(g)
        * rv.powf(q / pp).max(rv.powf(q / pm))
        * ru.powf((pm - q) / pp).max(ru.powf((pp - q) / pm));
    Ok(Gap { lhs, rhs })
}

/// `𝐓_𝔨(s) = min{s, 𝔨}`.
pub fn truncation(s: f64, k: f64) -> f64 {
    s.min(k)
}
