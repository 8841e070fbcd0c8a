//! Tabulated functions derived from an N-function.

use super::{NFunction, YoungFunction};
use crate::error::{Error, Result};
use crate::interp::{log_grid, LogLogTable};
use crate::quadrature::integrate;
use crate::roots::solve_increasing;

pub const DEFAULT_TABLE_POINTS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum DerivedKind {
    Complementary,
    SobolevConjugate { s: f64, dim: usize },
    Inverse,
    PowerCompose { exponent: f64 },
}

#[derive(Debug, Clone)]
pub struct DerivedNFunction {
    kind: DerivedKind,
    base: String,
    table: LogLogTable,
    inverse: Option<LogLogTable>,
    breakpoints: Vec<f64>,
}

impl DerivedNFunction {
    fn new(kind: DerivedKind, base: String, table: LogLogTable, breakpoints: Vec<f64>) -> Self {
        let inverse = table.inverted().ok();
        DerivedNFunction {
            kind,
            base,
            table,
            inverse,
            breakpoints,
        }
    }

    pub fn kind(&self) -> &DerivedKind {
        &self.kind
    }

    /// Label of the function this was derived from.
    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn table(&self) -> &LogLogTable {
        &self.table
    }

    pub fn value(&self, t: f64) -> f64 {
        self.table.value(t)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.table.deriv(t)
    }

    pub fn second_deriv(&self, t: f64) -> f64 {
        self.table.second_deriv(t)
    }

    /// Inverse of the tabulated map, if it is strictly increasing.
    pub fn inverse_value(&self, y: f64) -> Option<f64> {
        self.inverse.as_ref().map(|inv| inv.value(y))
    }
}

impl YoungFunction for DerivedNFunction {
    fn value(&self, t: f64) -> f64 {
        self.table.value(t)
    }

    fn deriv(&self, t: f64) -> f64 {
        self.table.deriv(t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn domain(&self) -> (f64, f64) {
        self.table.t_range()
    }

    fn label(&self) -> String {
        match &self.kind {
            DerivedKind::Complementary => format!("conj[{}]", self.base),
            DerivedKind::SobolevConjugate { s, dim } => format!("sobolev[{}; s={s}, N={dim}]", self.base),
            DerivedKind::Inverse => format!("inverse[{}]", self.base),
            DerivedKind::PowerCompose { exponent } => format!("{}∘t^{exponent}", self.base),
        }
    }
}

/// `G̅(s) = sup_τ (sτ − G(τ))`, evaluated as `s τ* − G(τ*)` with `g(τ*) = s`.
///
/// Nodes cover `g` of the trusted domain of `G`, plus both one-sided
/// derivatives at each breakpoint (where `G̅` is affine).
pub fn complementary<F: YoungFunction + ?Sized>(g: &F, n_points: usize) -> Result<DerivedNFunction> {
    let (lo, hi) = g.domain();
    let (s_lo, s_hi) = (g.deriv(lo), g.deriv(hi));
    if !(s_lo > 0.0 && s_hi > s_lo) {
        return Err(Error::InvalidNFunction("derivative range is degenerate".into()));
    }
    let mut ss = log_grid(s_lo, s_hi, n_points.max(2));
    let mut images = Vec::new();
    for b in g.breakpoints() {
        if b > lo && b < hi {
            ss.push(g.deriv_left(b));
            ss.push(g.deriv(b));
            images.push(g.deriv_left(b));
            images.push(g.deriv(b));
        }
    }
    ss.sort_by(f64::total_cmp);
    ss.dedup();
    let mut vals = Vec::with_capacity(ss.len());
    let mut slopes = Vec::with_capacity(ss.len());
    for &s in &ss {
        let tau = solve_increasing(|t| g.deriv(t), s, lo, hi)?;
        let v = s * tau - g.value(tau);
        if !(v > 0.0) {
            return Err(Error::Internal(format!("conjugate value {v} at s = {s}")));
        }
        vals.push(v);
        slopes.push(s * tau / v);
    }
    let table = LogLogTable::with_slopes(&ss, &vals, &slopes)?;
    Ok(DerivedNFunction::new(DerivedKind::Complementary, g.label(), table, images))
}

/// Tabulated `G⁻¹`.
pub fn inverse<F: YoungFunction + ?Sized>(g: &F, n_points: usize) -> Result<DerivedNFunction> {
    let (lo, hi) = g.domain();
    let mut ts = log_grid(lo, hi, n_points.max(2));
    let mut kinks = Vec::new();
    for b in g.breakpoints() {
        if b > lo && b < hi {
            ts.push(b * (1.0 - 1e-9));
            ts.push(b);
            kinks.push(g.value(b));
        }
    }
    ts.sort_by(f64::total_cmp);
    let vals: Vec<f64> = ts.iter().map(|&t| g.value(t)).collect();
    let slopes: Vec<f64> = ts.iter().zip(&vals).map(|(&t, &v)| t * g.deriv(t) / v).collect();
    let table = LogLogTable::with_slopes(&ts, &vals, &slopes)?.inverted()?;
    Ok(DerivedNFunction::new(DerivedKind::Inverse, g.label(), table, kinks))
}

/// Outcome of the two tail tests for the Sobolev conjugate integral.
#[derive(Debug, Clone, Copy)]
pub struct SobolevTails {
    /// Log-slope of `G⁻¹(τ) τ^{-(N+s)/N}` at the small end; must exceed −1.
    pub slope_zero: f64,
    /// Log-slope at the large end; must be at least −1.
    pub slope_infinity: f64,
}

impl SobolevTails {
    pub fn of(g: &NFunction, s: f64, dim: usize) -> Self {
        let e = (dim as f64 + s) / dim as f64;
        let (lo, hi) = g.eval_domain();
        let inv_slope = |t: f64| g.value(t) / (t * g.deriv(t));
        SobolevTails {
            slope_zero: inv_slope(lo) - e,
            slope_infinity: inv_slope(hi) - e,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.slope_zero > -1.0) {
            return Err(Error::SobolevConjugate(format!(
                "integral over (0,1) diverges: integrand behaves like τ^{:.6} near 0",
                self.slope_zero
            )));
        }
        if self.slope_infinity < -1.0 {
            return Err(Error::SobolevConjugate(format!(
                "integral over (1,∞) converges: integrand behaves like τ^{:.6} at infinity",
                self.slope_infinity
            )));
        }
        Ok(())
    }
}

/// `G_*` from `(G_*)⁻¹(t) = ∫₀ᵗ G⁻¹(τ) τ^{-(N+s)/N} dτ`.
pub fn sobolev_conjugate(g: &NFunction, s: f64, dim: usize) -> Result<DerivedNFunction> {
    if !(s > 0.0 && s < 1.0) || dim == 0 {
        return Err(Error::InvalidParameter(format!("need s in (0,1) and N >= 1, got s={s}, N={dim}")));
    }
    let tails = SobolevTails::of(g, s, dim);
    tails.check()?;
    let e = (dim as f64 + s) / dim as f64;
    let ginv = inverse(g, DEFAULT_TABLE_POINTS)?;
    let (lo, hi) = g.eval_domain();
    let (tau_lo, tau_hi) = (g.value(lo), g.value(hi));
    let mut taus = log_grid(tau_lo, tau_hi, DEFAULT_TABLE_POINTS);
    taus.extend(YoungFunction::breakpoints(&ginv));
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let phi = |tau: f64| ginv.value(tau) * tau.powf(-e);
    let mut acc = vec![tau_lo * phi(tau_lo) / (tails.slope_zero + 1.0)];
    for w in taus.windows(2) {
        let piece = integrate(|x| {
            let t = x.exp();
            phi(t) * t
        }, w[0].ln(), w[1].ln(), 0.0, 1e-13, 64)
        .value;
        let last = *acc.last().unwrap();
        acc.push(last + piece);
    }
    let slopes: Vec<f64> = taus.iter().zip(&acc).map(|(&t, &i)| t * phi(t) / i).collect();
    let inv_table = LogLogTable::with_slopes(&taus, &acc, &slopes)?;
    let table = inv_table.inverted()?;
    let kinks = YoungFunction::breakpoints(&ginv)
        .into_iter()
        .map(|k| inv_table.value(k))
        .collect();
    let mut out = DerivedNFunction::new(DerivedKind::SobolevConjugate { s, dim }, g.label(), table, kinks);
    out.inverse = Some(inv_table);
    Ok(out)
}

/// `t ↦ D(t^exponent)`.
pub fn compose_power(d: &DerivedNFunction, exponent: f64) -> Result<DerivedNFunction> {
    if !(exponent > 0.0 && exponent.is_finite()) {
        return Err(Error::InvalidParameter(format!("composition exponent must be > 0, got {exponent}")));
    }
    let table = d.table.compose_power(exponent);
    let kinks = d.breakpoints.iter().map(|b| b.powf(1.0 / exponent)).collect();
    Ok(DerivedNFunction::new(
        DerivedKind::PowerCompose { exponent },
        YoungFunction::label(d),
        table,
        kinks,
    ))
}

/// `K(t) = G_*(t^{1/(β+1)})`.
pub fn k_function(g_star: &DerivedNFunction, beta: f64) -> Result<DerivedNFunction> {
    if !(beta >= 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be >= 0, got {beta}")));
    }
    compose_power(g_star, 1.0 / (beta + 1.0))
}

/// `𝔉(t) = G_*(t^{1/(1−α)})`, defined only for `α < 1`.
pub fn frak_f(g_star: &DerivedNFunction, alpha: f64) -> Result<DerivedNFunction> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("𝔉 needs 0 <= alpha < 1, got {alpha}")));
    }
    compose_power(g_star, 1.0 / (1.0 - alpha))
}
