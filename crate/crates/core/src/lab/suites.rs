//! Seeded randomized sweeps over the built-in families.

use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::discrete::{diaz_saa_scale, diaz_saa_value};
use super::gaps::{
    conjugate_sandwich_gap, hidden_convexity_gap, monotone_difference_gap, picone_gap, picone_regime,
    scaling_gap, tolerance, young_gap, Gap,
};
use super::report::{InequalityReport, Witness};
use crate::error::{Error, Result};
use crate::grid::{lg_norm, modular_g, modular_sg, seminorm, Mesh, SgDomain};
use crate::nfunction::{complementary, DerivedNFunction, NFunction, YoungFunction, DEFAULT_TABLE_POINTS};
use crate::sampling::{fourier_bump, log_uniform, positive_bump, stream};

/// Samples per independently seeded chunk.
pub const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Young,
    Scaling,
    ModularSandwich,
    Holder,
    ConjugateSandwich,
    MonotoneDifference,
    HiddenConvexity,
    Picone,
    DiazSaa,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Young,
        Suite::Scaling,
        Suite::ModularSandwich,
        Suite::Holder,
        Suite::ConjugateSandwich,
        Suite::MonotoneDifference,
        Suite::HiddenConvexity,
        Suite::Picone,
        Suite::DiazSaa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Young => "young",
            Suite::Scaling => "scaling",
            Suite::ModularSandwich => "modular_sandwich",
            Suite::Holder => "holder",
            Suite::ConjugateSandwich => "conjugate_sandwich",
            Suite::MonotoneDifference => "monotone_difference",
            Suite::HiddenConvexity => "hidden_convexity",
            Suite::Picone => "picone",
            Suite::DiazSaa => "diaz_saa",
        }
    }

    fn needs_conjugate(self) -> bool {
        matches!(self, Suite::Young | Suite::Holder | Suite::ConjugateSandwich)
    }

    fn tolerance_rule(self) -> &'static str {
        match self {
            Suite::ModularSandwich | Suite::ConjugateSandwich => "1e-6*max(|lhs|,|rhs|)",
            Suite::DiazSaa => "1e-8*scale",
            _ => "1e-8*(1+|lhs|+|rhs|)",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// The four families the sweeps run over by default.
pub fn default_families() -> Result<Vec<NFunction>> {
    Ok(vec![
        NFunction::power(3.0)?,
        NFunction::power(4.0)?,
        NFunction::power_sum(3.0, 4.0)?,
        NFunction::power_log(3.0)?,
    ])
}

struct FamilyCtx {
    g: NFunction,
    label: String,
    g_bar: Option<DerivedNFunction>,
    mesh: Mesh,
}

struct Sample {
    gap: Gap,
    tol: f64,
    inputs: Vec<(&'static str, f64)>,
    regime: Option<usize>,
    ratio: Option<f64>,
    /// Set when a secondary check (e.g. an equality case) failed.
    extra_violation: bool,
}

impl Sample {
    fn new(gap: Gap, inputs: Vec<(&'static str, f64)>) -> Self {
        Sample {
            tol: tolerance(gap.lhs, gap.rhs),
            gap,
            inputs,
            regime: None,
            ratio: None,
            extra_violation: false,
        }
    }

    fn relative(mut self, rel: f64) -> Self {
        self.tol = rel * self.gap.lhs.abs().max(self.gap.rhs.abs());
        self
    }

    fn violated(&self) -> bool {
        self.gap.gap() < -self.tol || self.extra_violation
    }
}

#[derive(Clone)]
struct Witnessed {
    family: String,
    index: u64,
    inputs: Vec<(&'static str, f64)>,
    gap: Gap,
    bad: bool,
}

#[derive(Clone)]
struct Tally {
    samples: u64,
    violations: u64,
    min_gap: f64,
    family: String,
    witness: Option<Witnessed>,
    regimes: [u64; 4],
    min_ratio: f64,
}

impl Tally {
    fn new(family: &str) -> Self {
        Tally {
            family: family.to_string(),
            samples: 0,
            violations: 0,
            min_gap: f64::INFINITY,
            witness: None,
            regimes: [0; 4],
            min_ratio: f64::INFINITY,
        }
    }

    fn add(&mut self, index: u64, s: Sample) {
        self.samples += 1;
        let bad = s.violated();
        if bad {
            self.violations += 1;
        }
        let gap = s.gap.gap();
        if self.prefer(bad, gap) {
            self.witness = Some(Witnessed {
                family: self.family.clone(),
                index,
                inputs: s.inputs,
                gap: s.gap,
                bad,
            });
        }
        self.min_gap = self.min_gap.min(gap);
        if let Some(r) = s.regime {
            self.regimes[r] += 1;
        }
        if let Some(r) = s.ratio {
            self.min_ratio = self.min_ratio.min(r);
        }
    }

    /// The first violation wins; otherwise the smallest gap.
    fn prefer(&self, bad: bool, gap: f64) -> bool {
        match &self.witness {
            None => true,
            Some(w) => (bad && !w.bad) || (bad == w.bad && gap < self.min_gap),
        }
    }

    fn merge(&mut self, other: Tally) {
        self.samples += other.samples;
        self.violations += other.violations;
        if let Some(w) = other.witness {
            if self.prefer(w.bad, w.gap.gap()) {
                self.witness = Some(w);
            }
        }
        self.min_gap = self.min_gap.min(other.min_gap);
        for k in 0..4 {
            self.regimes[k] += other.regimes[k];
        }
        self.min_ratio = self.min_ratio.min(other.min_ratio);
    }
}

/// Sweep parameters.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub seed: u64,
    /// Samples per family.
    pub samples: usize,
    pub families: Vec<NFunction>,
}

impl SweepConfig {
    pub fn new(seed: u64, samples: usize) -> Result<Self> {
        Ok(SweepConfig {
            seed,
            samples,
            families: default_families()?,
        })
    }
}

/// Exponent `q ∈ (1, p⁻]`; every eighth draw is exactly `p⁻`.
fn draw_q(rng: &mut ChaCha8Rng, g: &NFunction, index: u64) -> f64 {
    let pm = g.p_minus();
    if index.is_multiple_of(8) {
        pm
    } else {
        let q = rng.random_range(1.0..pm);
        if q > 1.0 {
            q
        } else {
            pm
        }
    }
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let m = log_uniform(rng, lo, hi);
    if rng.random_bool(0.5) {
        m
    } else {
        -m
    }
}

fn draw_sample(suite: Suite, ctx: &FamilyCtx, rng: &mut ChaCha8Rng, index: u64) -> Result<Sample> {
    let g = &ctx.g;
    Ok(match suite {
        Suite::Young => {
            let g_bar = ctx.g_bar.as_ref().expect("conjugate built");
            let draw = |rng: &mut ChaCha8Rng| {
                if rng.random_bool(0.5) {
                    rng.random_range(0.0..100.0f64).max(f64::MIN_POSITIVE)
                } else {
                    log_uniform(rng, -4.0, 2.0)
                }
            };
            let a = draw(rng);
            if index.is_multiple_of(10) {
                let b = g.deriv(a);
                let gap = young_gap(g, g_bar, a, b);
                let mut s = Sample::new(gap, vec![("a", a), ("b", b), ("equality_case", 1.0)]);
                s.extra_violation = gap.gap().abs() > 1e-6 * gap.rhs;
                s
            } else {
                let b = draw(rng);
                Sample::new(young_gap(g, g_bar, a, b), vec![("a", a), ("b", b)])
            }
        }
        Suite::Scaling => {
            let lambda = log_uniform(rng, -3.0, 3.0);
            let t = log_uniform(rng, -4.0, 4.0);
            Sample::new(scaling_gap(g, lambda, t), vec![("lambda", lambda), ("t", t)])
        }
        Suite::ModularSandwich => {
            let amp = log_uniform(rng, -2.0, 2.0);
            let u = fourier_bump(&ctx.mesh, rng).scaled(amp);
            let s = rng.random_range(0.1..0.9);
            let (pm, pp) = g.indices();
            let sandwich = |norm: f64, modular: f64| {
                let (a, b) = (norm.powf(pm), norm.powf(pp));
                let lower = Gap {
                    lhs: a.min(b),
                    rhs: modular,
                };
                let upper = Gap {
                    lhs: modular,
                    rhs: a.max(b),
                };
                let rel = |x: &Gap| x.gap() / x.lhs.abs().max(x.rhs.abs());
                if rel(&upper) < rel(&lower) {
                    upper
                } else {
                    lower
                }
            };
            let g1 = sandwich(lg_norm(&u, g)?.norm, modular_g(&u, g));
            let g2 = sandwich(
                seminorm(&u, g, s, SgDomain::FullSpace)?.norm,
                modular_sg(&u, g, s, SgDomain::FullSpace)?,
            );
            let rel = |x: &Gap| x.gap() / x.lhs.abs().max(x.rhs.abs());
            let worst = if rel(&g2) < rel(&g1) { g2 } else { g1 };
            let mut inputs = vec![("amplitude", amp), ("s", s)];
            inputs.extend(u.values().iter().map(|&v| ("u", v)));
            Sample::new(worst, inputs).relative(1e-6)
        }
        Suite::Holder => {
            let g_bar = ctx.g_bar.as_ref().expect("conjugate built");
            let (au, av) = (log_uniform(rng, -2.0, 2.0), log_uniform(rng, -2.0, 2.0));
            let u = fourier_bump(&ctx.mesh, rng).scaled(au);
            let v = fourier_bump(&ctx.mesh, rng).scaled(av);
            let c = crate::grid::holder_pairing_check(&u, &v, g, g_bar)?;
            let mut inputs: Vec<(&'static str, f64)> = u.values().iter().map(|&x| ("u", x)).collect();
            inputs.extend(v.values().iter().map(|&x| ("v", x)));
            Sample::new(Gap { lhs: c.lhs, rhs: c.rhs }, inputs)
        }
        Suite::ConjugateSandwich => {
            let g_bar = ctx.g_bar.as_ref().expect("conjugate built");
            let t = if index.is_multiple_of(16) { 1.0 } else { log_uniform(rng, -4.0, 4.0) };
            Sample::new(conjugate_sandwich_gap(g, g_bar, t), vec![("t", t)]).relative(1e-6)
        }
        Suite::MonotoneDifference => {
            let a = signed(rng, -3.0, 3.0);
            let b = if index.is_multiple_of(64) { -a } else { signed(rng, -3.0, 3.0) };
            let (lhs, ratio) = monotone_difference_gap(g, a, b);
            let mut s = Sample::new(Gap { lhs: 0.0, rhs: lhs }, vec![("a", a), ("b", b)]);
            s.ratio = ratio;
            s.extra_violation = ratio.is_some_and(|r| !(r > 0.0));
            s
        }
        Suite::HiddenConvexity => {
            let q = draw_q(rng, g, index);
            let val = |rng: &mut ChaCha8Rng| {
                if rng.random_bool(0.05) {
                    0.0
                } else {
                    log_uniform(rng, -3.0, 3.0)
                }
            };
            let (a, b, c, d) = (val(rng), val(rng), val(rng), val(rng));
            let t = match index % 32 {
                0 => 0.0,
                1 => 1.0,
                _ => rng.random_range(0.0..=1.0),
            };
            let gap = hidden_convexity_gap(g, q, (a, b), (c, d), t)?;
            let mut s = Sample::new(gap, vec![("q", q), ("u0x", a), ("u0y", b), ("u1x", c), ("u1y", d), ("t", t)]);
            s.extra_violation = (t == 0.0 || t == 1.0) && gap.gap() != 0.0;
            s
        }
        Suite::Picone => {
            let q = draw_q(rng, g, index);
            let regime = (index % 4) as usize;
            let diff = |rng: &mut ChaCha8Rng, big: bool| {
                if big {
                    log_uniform(rng, 0.0, 2.0)
                } else {
                    log_uniform(rng, -3.0, 0.0) * (1.0 - 1e-12)
                }
            };
            let du = diff(rng, regime & 1 == 1);
            let dv = diff(rng, regime & 2 == 2);
            let umin = log_uniform(rng, -3.0, 2.0);
            let vmin = if rng.random_bool(0.1) { 0.0 } else { log_uniform(rng, -3.0, 2.0) };
            let u = if rng.random_bool(0.5) { (umin, umin + du) } else { (umin + du, umin) };
            let v = if rng.random_bool(0.5) { (vmin, vmin + dv) } else { (vmin + dv, vmin) };
            let mut s = Sample::new(
                picone_gap(g, q, u, v)?,
                vec![("q", q), ("ux", u.0), ("uy", u.1), ("vx", v.0), ("vy", v.1)],
            );
            s.regime = Some(picone_regime(u, v));
            s
        }
        Suite::DiazSaa => {
            let q = draw_q(rng, g, index);
            let s = 0.5;
            let au = log_uniform(rng, -1.0, 1.0);
            let av = log_uniform(rng, -1.0, 1.0);
            let u = positive_bump(&ctx.mesh, rng).scaled(au);
            let v = positive_bump(&ctx.mesh, rng).scaled(av);
            let value = diaz_saa_value(&u, &v, g, s, q)?;
            let scale = diaz_saa_scale(&u, &v, g, s)?;
            let mut inputs: Vec<(&'static str, f64)> = vec![("q", q), ("s", s)];
            inputs.extend(u.values().iter().map(|&x| ("u", x)));
            inputs.extend(v.values().iter().map(|&x| ("v", x)));
            let mut smp = Sample::new(Gap { lhs: 0.0, rhs: value }, inputs);
            smp.tol = 1e-8 * scale;
            smp
        }
    })
}

fn run_family(suite: Suite, ctx: &FamilyCtx, cfg: &SweepConfig) -> Result<Tally> {
    let chunks = cfg.samples.div_ceil(CHUNK);
    let tallies: Vec<Result<Tally>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(cfg.seed, &[suite.name(), &ctx.label], c as u64);
            let mut tally = Tally::new(&ctx.label);
            let end = ((c + 1) * CHUNK).min(cfg.samples);
            for index in (c * CHUNK)..end {
                let s = draw_sample(suite, ctx, &mut rng, index as u64)?;
                tally.add(index as u64, s);
            }
            Ok(tally)
        })
        .collect();
    let mut total = Tally::new(&ctx.label);
    for t in tallies {
        total.merge(t?);
    }
    Ok(total)
}

/// Run one suite over every configured family and merge the results.
pub fn run_suite(suite: Suite, cfg: &SweepConfig) -> Result<InequalityReport> {
    if cfg.families.is_empty() {
        return Err(Error::InvalidParameter("no families selected".into()));
    }
    let mesh = Mesh::new(0.0, 1.0, 16)?;
    let mut total = Tally::new("");
    let mut notes = Vec::new();
    for g in &cfg.families {
        let label = g.label();
        let g_bar = if suite.needs_conjugate() {
            Some(complementary(g, DEFAULT_TABLE_POINTS)?)
        } else {
            None
        };
        let ctx = FamilyCtx {
            g: g.clone(),
            label: label.clone(),
            g_bar,
            mesh,
        };
        let t = run_family(suite, &ctx, cfg)?;
        notes.push((format!("{label}.violations"), t.violations.to_string()));
        if suite == Suite::MonotoneDifference {
            notes.push((format!("{label}.C_est"), format!("{}", t.min_ratio)));
        }
        if suite == Suite::Picone {
            for (k, c) in t.regimes.iter().enumerate() {
                notes.push((format!("{label}.regime{k}"), c.to_string()));
            }
        }
        total.merge(t);
    }
    if suite == Suite::Picone {
        notes.push(("constant".into(), "artifact constant C = p+ * G(1)".into()));
        for k in 0..4 {
            notes.push((format!("regime{k}"), total.regimes[k].to_string()));
        }
    }
    let mut witness = Witness::default();
    if let Some(w) = &total.witness {
        witness.push("suite", suite.name());
        witness.push("family", &w.family);
        witness.push("seed", cfg.seed);
        witness.push("index", w.index);
        witness.push("lhs", w.gap.lhs);
        witness.push("rhs", w.gap.rhs);
        witness.push("gap", w.gap.gap());
        for (k, v) in &w.inputs {
            witness.push(*k, v);
        }
    }
    Ok(InequalityReport {
        name: suite.name().to_string(),
        samples: total.samples,
        violations: total.violations,
        min_gap: total.min_gap,
        witness,
        tolerance: suite.tolerance_rule().to_string(),
        notes,
    })
}

/// Per-regime hit counts of a Picone report, summed over families.
pub fn picone_regime_counts(report: &InequalityReport) -> Option<[u64; 4]> {
    let mut out = [0u64; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = report.note(&format!("regime{k}"))?.parse().ok()?;
    }
    Some(out)
}

