//! N-functions (Young functions) and their derived objects.
//!
//! An [`NFunction`] is one of the analytic families
//!
//! * `Power(p)`: `G(t) = t^p / p`,
//! * `PowerLog(p)`: `G(t) = t^p (|ln t| + 1) / p`,
//! * `PowerSum(p, q)`: `G(t) = t^p / p + t^q / q`,
//!
//! or a `Tabulated` function read from a two-column `(t, G(t))` table.
//! Construction validates convexity, monotonicity of `g = G'`, the growth
//! index bounds and the doubling condition on a log grid, and fills the growth
//! indices `(p⁻, p⁺)`.

mod derived;
mod growth;
mod indices;
mod tabulated;

use std::path::Path;

use crate::error::{Error, Result};
use crate::interp::log_grid;

pub use derived::{
    complementary, compose_power, frak_f, inverse, k_function, sobolev_conjugate, DerivedKind, SobolevTails,
    DerivedNFunction, DEFAULT_TABLE_POINTS,
};
pub use growth::{essentially_faster, GrowthComparison};
pub use indices::{default_index_grid, estimate_indices};
pub use tabulated::TabulatedG;

/// Anything with a value `G(t)` and right derivative `g(t)` on `t ≥ 0`.
pub trait YoungFunction: Send + Sync {
    fn value(&self, t: f64) -> f64;

    /// Right derivative.
    fn deriv(&self, t: f64) -> f64;

    /// Left derivative; differs from [`Self::deriv`] only at breakpoints.
    fn deriv_left(&self, t: f64) -> f64 {
        self.deriv(t)
    }

    /// Points where the derivative jumps.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Range of `t` on which numeric evaluation is trusted.
    fn domain(&self) -> (f64, f64);

    fn label(&self) -> String;
}

/// Default trusted evaluation domain of the analytic families.
pub const ANALYTIC_DOMAIN: (f64, f64) = (1e-6, 1e6);

const VALIDATION_POINTS: usize = 600;

/// Smallest `p` for which `PowerLog(p)` has a nondecreasing derivative:
/// the root of `p² − 3p + 1`.
pub fn power_log_min_exponent() -> f64 {
    (3.0 + 5f64.sqrt()) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Power,
    PowerLog,
    PowerSum,
}

#[derive(Debug, Clone)]
pub enum Family {
    Power { p: f64 },
    PowerLog { p: f64 },
    PowerSum { p: f64, q: f64 },
    Tabulated(TabulatedG),
}

#[derive(Debug, Clone, Copy)]
struct Pow {
    p: f64,
    int: Option<i32>,
}

impl Pow {
    fn new(p: f64) -> Self {
        let int = (p.fract() == 0.0 && p.abs() <= 64.0).then_some(p as i32);
        Pow { p, int }
    }

    #[inline]
    fn eval(&self, t: f64) -> f64 {
        match self.int {
            Some(k) => t.powi(k),
            None => t.powf(self.p),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct PowerTerms {
    p: f64,
    g: Pow,
    dg: Pow,
    ddg: Pow,
}

impl PowerTerms {
    fn new(p: f64) -> Self {
        PowerTerms {
            p,
            g: Pow::new(p),
            dg: Pow::new(p - 1.0),
            ddg: Pow::new(p - 2.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NFunction {
    family: Family,
    terms: [Option<PowerTerms>; 2],
    p_minus: f64,
    p_plus: f64,
    eval_domain: (f64, f64),
    warnings: Vec<String>,
}

impl NFunction {
    /// `G(t) = t^p / p`.
    pub fn power(p: f64) -> Result<Self> {
        check_exponent("Power", p)?;
        Self::finish(Family::Power { p }, [Some(PowerTerms::new(p)), None], (p, p), ANALYTIC_DOMAIN)
    }

    /// `G(t) = t^p (|ln t| + 1) / p`.
    ///
    /// The derivative jumps at `t = 1` (from `1 − 1/p` to `1 + 1/p`); the
    /// right limit is used there. `g` is nondecreasing only for
    /// `p ≥ (3 + √5)/2`, so smaller exponents are rejected.
    pub fn power_log(p: f64) -> Result<Self> {
        check_exponent("PowerLog", p)?;
        let pmin = power_log_min_exponent();
        if p < pmin {
            return Err(Error::InvalidNFunction(format!(
                "PowerLog({p}): g' = t^(p-2)·((p-1)(1-1/p-ln t) - 1) is negative just below t = 1; \
                 g is nondecreasing only for p >= {pmin:.6}"
            )));
        }
        // inf of 1 + t g'/g is reached at t -> 1-, sup of t g/G at t -> 1+.
        let indices = (p - p / (p - 1.0), p + 1.0);
        Self::finish(Family::PowerLog { p }, [Some(PowerTerms::new(p)), None], indices, ANALYTIC_DOMAIN)
    }

    /// `G(t) = t^p / p + t^q / q` with `p ≤ q`.
    pub fn power_sum(p: f64, q: f64) -> Result<Self> {
        check_exponent("PowerSum", p)?;
        if !(q >= p) || !q.is_finite() {
            return Err(Error::InvalidParameter(format!("PowerSum requires p <= q, got p={p}, q={q}")));
        }
        Self::finish(
            Family::PowerSum { p, q },
            [Some(PowerTerms::new(p)), Some(PowerTerms::new(q))],
            (p, q),
            ANALYTIC_DOMAIN,
        )
    }

    /// Dispatch on a family tag and a parameter list.
    pub fn construct(kind: FamilyKind, params: &[f64]) -> Result<Self> {
        let need = if kind == FamilyKind::PowerSum { 2 } else { 1 };
        if params.len() != need {
            return Err(Error::InvalidParameter(format!(
                "{kind:?} takes {need} parameter(s), got {}",
                params.len()
            )));
        }
        match kind {
            FamilyKind::Power => Self::power(params[0]),
            FamilyKind::PowerLog => Self::power_log(params[0]),
            FamilyKind::PowerSum => Self::power_sum(params[0], params[1]),
        }
    }

    /// Tabulated `G` from strictly increasing `ts` and values `gs`.
    pub fn tabulated(ts: &[f64], gs: &[f64]) -> Result<Self> {
        let tab = TabulatedG::new(ts, gs)?;
        let domain = tab.t_range();
        let mut grid = log_grid(domain.0, domain.1, 2048);
        grid.extend(log_grid(domain.0, domain.1, VALIDATION_POINTS));
        grid.extend(tab.table().nodes().map(|(t, _)| t));
        grid.sort_by(f64::total_cmp);
        let mut nf = NFunction {
            family: Family::Tabulated(tab),
            terms: [None, None],
            p_minus: f64::NAN,
            p_plus: f64::NAN,
            eval_domain: domain,
            warnings: Vec::new(),
        };
        let (lo, hi) = estimate_indices(&nf, &grid)?;
        nf.p_minus = lo;
        nf.p_plus = hi;
        nf.validate()?;
        Ok(nf)
    }

    /// Parse a two-column UTF-8 table (`t G(t)` per line, `#` comments).
    pub fn from_table_text(text: &str) -> Result<Self> {
        let (ts, gs) = parse_two_columns(text)?;
        Self::tabulated(&ts, &gs)
    }

    pub fn from_table_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_table_text(&std::fs::read_to_string(path)?)
    }

    fn finish(
        family: Family,
        terms: [Option<PowerTerms>; 2],
        indices: (f64, f64),
        eval_domain: (f64, f64),
    ) -> Result<Self> {
        let nf = NFunction {
            family,
            terms,
            p_minus: indices.0,
            p_plus: indices.1,
            eval_domain,
            warnings: Vec::new(),
        };
        let mut nf = nf;
        nf.validate()?;
        Ok(nf)
    }

    fn validate(&mut self) -> Result<()> {
        if !self.p_plus.is_finite() {
            return Err(Error::InvalidNFunction("upper growth index must be finite".into()));
        }
        if self.p_minus <= 2.0 {
            self.warnings.push(format!(
                "lower growth index p- = {} does not satisfy p- > 2",
                fmt_g(self.p_minus)
            ));
        }
        if self.value(0.0) != 0.0 || self.deriv(0.0) != 0.0 {
            return Err(Error::InvalidNFunction("G(0) and g(0) must vanish".into()));
        }
        let (lo, hi) = self.eval_domain;
        let mut ts = log_grid(lo, hi, VALIDATION_POINTS);
        for b in self.breakpoints() {
            ts.extend([b * (1.0 - 1e-9), b, b * (1.0 + 1e-9)]);
        }
        ts.sort_by(f64::total_cmp);
        let gs: Vec<f64> = ts.iter().map(|&t| self.value(t)).collect();
        for (k, &t) in ts.iter().enumerate() {
            let (g_val, dg) = (self.deriv(t), self.second_deriv(t));
            if !(gs[k] > 0.0 && gs[k].is_finite() && g_val > 0.0 && g_val.is_finite()) {
                return Err(Error::InvalidNFunction(format!("G or g not positive/finite at t={t}")));
            }
            if dg < -1e-12 * g_val / t {
                return Err(Error::InvalidNFunction(format!("g' = {dg} < 0 at t = {t}")));
            }
            let ratio = t * g_val / gs[k];
            if ratio < self.p_minus * (1.0 - 1e-8) || ratio > self.p_plus * (1.0 + 1e-8) {
                return Err(Error::InvalidNFunction(format!(
                    "t g/G = {ratio} outside [{}, {}] at t = {t}",
                    self.p_minus, self.p_plus
                )));
            }
            let doubled = self.value(2.0 * t);
            if doubled > 2f64.powf(self.p_plus) * gs[k] * (1.0 + 1e-9) {
                return Err(Error::InvalidNFunction(format!("doubling condition fails at t = {t}")));
            }
        }
        for w in 0..ts.len().saturating_sub(2) {
            let (t0, t1, t2) = (ts[w], ts[w + 1], ts[w + 2]);
            let (g0, g1, g2) = (gs[w], gs[w + 1], gs[w + 2]);
            let dd = ((g2 - g1) / (t2 - t1) - (g1 - g0) / (t1 - t0)) / (0.5 * (t2 - t0));
            let scale = (g0 + g1 + g2) / ((t2 - t0) * (t2 - t0)) + (g0 + g2) / (t0 * t2);
            if dd < -1e-10 * scale {
                return Err(Error::InvalidNFunction(format!("G not convex near t = {t1}")));
            }
            if self.deriv(t1) < self.deriv(t0) * (1.0 - 1e-12) {
                return Err(Error::InvalidNFunction(format!("g decreasing near t = {t1}")));
            }
        }
        Ok(())
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Lower growth index `p⁻`.
    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    /// Upper growth index `p⁺`.
    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn indices(&self) -> (f64, f64) {
        (self.p_minus, self.p_plus)
    }

    pub fn eval_domain(&self) -> (f64, f64) {
        self.eval_domain
    }

    /// Construction-time diagnostics (e.g. `p⁻ ≤ 2`).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `G(t)` for `t ≥ 0`.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Power { .. } | Family::PowerSum { .. } => self
                .terms
                .iter()
                .flatten()
                .map(|pt| pt.g.eval(t) / pt.p)
                .sum(),
            Family::PowerLog { p } => {
                let pt = self.terms[0].unwrap();
                pt.g.eval(t) * (t.ln().abs() + 1.0) / p
            }
            Family::Tabulated(tab) => tab.value(t),
        }
    }

    /// `g(t) = G'(t)` (right derivative).
    #[inline]
    pub fn deriv(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Power { .. } | Family::PowerSum { .. } => {
                self.terms.iter().flatten().map(|pt| pt.dg.eval(t)).sum()
            }
            Family::PowerLog { p } => {
                let pt = self.terms[0].unwrap();
                let l = t.ln();
                let bracket = if t < 1.0 { 1.0 - 1.0 / p - l } else { 1.0 + 1.0 / p + l };
                pt.dg.eval(t) * bracket
            }
            Family::Tabulated(tab) => tab.deriv(t),
        }
    }

    /// `g'(t)`; at the `PowerLog` kink the right limit.
    pub fn second_deriv(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return match &self.family {
                Family::Tabulated(_) => 0.0,
                _ => self.second_deriv(f64::MIN_POSITIVE),
            };
        }
        match &self.family {
            Family::Power { .. } | Family::PowerSum { .. } => self
                .terms
                .iter()
                .flatten()
                .map(|pt| (pt.p - 1.0) * pt.ddg.eval(t))
                .sum(),
            Family::PowerLog { p } => {
                let pt = self.terms[0].unwrap();
                let l = t.ln();
                let bracket = if t < 1.0 {
                    (p - 1.0) * (1.0 - 1.0 / p - l) - 1.0
                } else {
                    (p - 1.0) * (1.0 + 1.0 / p + l) + 1.0
                };
                pt.ddg.eval(t) * bracket
            }
            Family::Tabulated(tab) => tab.second_deriv(t),
        }
    }

    /// `Λ(t) = ∫₀ᵗ G(τ)/τ dτ`.
    ///
    /// With `r ↦ c r^{-s}` substituted, `∫_a^b G(c r^{-s}) dr / r` equals
    /// `(Λ(c a^{-s}) − Λ(c b^{-s})) / s`, which is how exterior tails of the
    /// nonlocal modulars are evaluated.
    pub fn tail_primitive(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Power { .. } | Family::PowerSum { .. } => self
                .terms
                .iter()
                .flatten()
                .map(|pt| pt.g.eval(t) / (pt.p * pt.p))
                .sum(),
            Family::PowerLog { p } => {
                let tp = self.terms[0].unwrap().g.eval(t);
                let p2 = p * p;
                if t <= 1.0 {
                    tp * (1.0 - t.ln() + 1.0 / p) / p2
                } else {
                    (1.0 + 1.0 / p) / p2 + (tp * (1.0 + t.ln() - 1.0 / p) - (1.0 - 1.0 / p)) / p2
                }
            }
            Family::Tabulated(tab) => tab.tail_primitive(t),
        }
    }

    /// `G⁻¹(y)` by monotone bisection.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        crate::roots::solve_increasing(|t| self.value(t), y, 0.5, 2.0)
    }

    /// `G(1)`, the normalisation used by the Picone bound.
    pub fn at_one(&self) -> f64 {
        self.value(1.0)
    }
}

impl YoungFunction for NFunction {
    fn value(&self, t: f64) -> f64 {
        NFunction::value(self, t)
    }

    fn deriv(&self, t: f64) -> f64 {
        NFunction::deriv(self, t)
    }

    fn deriv_left(&self, t: f64) -> f64 {
        match &self.family {
            Family::PowerLog { p } if t == 1.0 => 1.0 - 1.0 / p,
            _ => NFunction::deriv(self, t),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match &self.family {
            Family::PowerLog { .. } => vec![1.0],
            _ => Vec::new(),
        }
    }

    fn domain(&self) -> (f64, f64) {
        self.eval_domain
    }

    fn label(&self) -> String {
        match &self.family {
            Family::Power { p } => format!("Power({})", fmt_g(*p)),
            Family::PowerLog { p } => format!("PowerLog({})", fmt_g(*p)),
            Family::PowerSum { p, q } => format!("PowerSum({},{})", fmt_g(*p), fmt_g(*q)),
            Family::Tabulated(t) => format!("Tabulated({} points)", t.len()),
        }
    }
}

impl std::fmt::Display for NFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

fn check_exponent(name: &str, p: f64) -> Result<()> {
    if !p.is_finite() || p < 2.0 {
        return Err(Error::InvalidParameter(format!("{name} requires p >= 2, got {p}")));
    }
    Ok(())
}

pub(crate) fn fmt_g(x: f64) -> String {
    format!("{x}")
}

/// Parse whitespace- or comma-separated two-column numeric text.
pub fn parse_two_columns(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|c| !c.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected two columns, found {}", cols.len()),
            });
        }
        let parse = |c: &str| {
            c.parse::<f64>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("bad number {c:?}: {e}"),
            })
        };
        xs.push(parse(cols[0])?);
        ys.push(parse(cols[1])?);
    }
    Ok((xs, ys))
}
