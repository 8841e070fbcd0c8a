//! TOML experiment configuration.
//!
//! ```toml
//! seed = 7
//!
//! [mesh]
//! a = 0.0
//! b = 1.0
//! n = 200
//! tail_radius = 1e6        # optional
//!
//! [nfunction]
//! family = "power"         # power | power_sum | power_log | tabulated
//! p = 3.0
//! q = 4.0                  # power_sum only
//! file = "g.txt"           # tabulated only: two columns t g(t)
//!
//! [problem]
//! s = 0.5
//! alpha = 0.5
//! beta = 0.5
//! f = "1"                  # expression, number or { file = "f.txt" }
//! k = "bump(0.5, 0.1)"
//! epsilon0 = 0.1
//! epsilon_min = 1e-6
//! obstacle = "0.1"         # optional upper obstacle
//! nonlinearity = "pow(u, -0.5) + pow(u, 0.5)"   # optional F(x, u)
//! preset = "torsion"       # optional: replaces nfunction, f, k, alpha, beta
//!
//! [solver]
//! tol = 1e-9
//! max_iter = 10000
//!
//! [init]
//! guess = "0.1"            # expression, number, file or "random"
//!
//! [verify]
//! suites = ["young", "picone"]
//! samples = 1e4
//!
//! [compare]
//! f = "2"                  # data of the larger problem; default: [problem]
//!
//! [uniqueness]
//! inits = ["0.1", "1", "random"]
//!
//! [norm]
//! u = "1"
//! kind = "LG"              # LG | seminorm_omega | seminorm_full
//! s = 0.5
//! ```
//!
//! Relative file paths are resolved against the directory of the config.

use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};

use orlicz_core::grid::{GridFunction, Mesh};
use orlicz_core::lab::{default_families, Suite, SweepConfig};
use orlicz_core::nfunction::{FamilyKind, NFunction};
use orlicz_core::sampling::{nonnegative_bump, stream};
use orlicz_core::solver::{torsion_spec, Nonlinearity, ProblemSpec, SolverOptions};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use toml::Spanned;

use crate::expr::Expr;

/// Configuration error with an optional `(line, column)` position.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub pos: Option<(usize, usize)>,
    pub msg: String,
}

impl ConfigError {
    fn plain(msg: impl Into<String>) -> Self {
        ConfigError { pos: None, msg: msg.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some((l, c)) => write!(f, "line {l}, column {c}: {}", self.msg),
            None => write!(f, "{}", self.msg),
        }
    }
}

impl std::error::Error for ConfigError {}

type CResult<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Number(f64),
    Text(String),
    File { file: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshBlock {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub tail_radius: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NFunctionBlock {
    pub family: Spanned<String>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub file: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub s: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub f: Option<Spanned<Source>>,
    pub k: Option<Spanned<Source>>,
    pub epsilon0: Option<f64>,
    pub epsilon_min: Option<f64>,
    pub obstacle: Option<Spanned<Source>>,
    pub nonlinearity: Option<Spanned<String>>,
    pub preset: Option<Spanned<String>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitBlock {
    pub guess: Option<Spanned<Source>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    pub suites: Spanned<Vec<String>>,
    pub samples: Spanned<f64>,
    pub families: Option<Vec<NFunctionBlock>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareBlock {
    pub f: Option<Spanned<Source>>,
    pub k: Option<Spanned<Source>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniquenessBlock {
    pub inits: Option<Spanned<Vec<Spanned<Source>>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormBlock {
    pub u: Spanned<Source>,
    pub kind: Spanned<String>,
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    mesh: Option<MeshBlock>,
    nfunction: Option<NFunctionBlock>,
    problem: Option<ProblemBlock>,
    #[serde(default)]
    solver: SolverBlock,
    #[serde(default)]
    init: InitBlock,
    verify: Option<VerifyBlock>,
    #[serde(default)]
    compare: CompareBlock,
    #[serde(default)]
    uniqueness: UniquenessBlock,
    norm: Option<NormBlock>,
}

/// Norm selected by the `[norm]` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Lg,
    SeminormOmega,
    SeminormFull,
}

/// A parsed configuration plus what is needed to resolve it.
#[derive(Debug, Clone)]
pub struct Config {
    raw: RawConfig,
    text: String,
    base_dir: PathBuf,
    digest: String,
    pub seed: u64,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl Config {
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> CResult<Config> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError {
            pos: e.span().map(|s| line_col(text, s.start)),
            msg: e.message().trim().to_string(),
        })?;
        let table: toml::Table = toml::from_str(text).map_err(|e| ConfigError::plain(e.to_string()))?;
        let canonical = toml::to_string(&table).map_err(|e| ConfigError::plain(e.to_string()))?;
        let digest = hex::encode(Sha256::digest(canonical.as_bytes()));
        Ok(Config {
            seed: raw.seed.unwrap_or(0),
            raw,
            text: text.to_string(),
            base_dir: base_dir.into(),
            digest,
        })
    }

    pub fn load(path: &Path) -> CResult<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::plain(format!("cannot read {}: {e}", path.display())))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Config::parse(&text, dir)
    }

    /// SHA-256 of the canonical (key-sorted) serialization.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    fn at(&self, span: Range<usize>, msg: impl Into<String>) -> ConfigError {
        ConfigError {
            pos: Some(line_col(&self.text, span.start)),
            msg: msg.into(),
        }
    }

    /// Error inside a quoted expression: point at the offending character.
    fn in_string(&self, span: Range<usize>, offset: usize, msg: impl Into<String>) -> ConfigError {
        let (line, col) = line_col(&self.text, span.start);
        ConfigError {
            pos: Some((line, col + 1 + offset)),
            msg: msg.into(),
        }
    }

    fn core<T>(&self, span: Option<Range<usize>>, r: orlicz_core::Result<T>) -> CResult<T> {
        r.map_err(|e| match span {
            Some(s) => self.at(s, e.to_string()),
            None => ConfigError::plain(e.to_string()),
        })
    }

    fn resolve(&self, file: &str) -> PathBuf {
        self.base_dir.join(file)
    }

    pub fn mesh(&self) -> CResult<Mesh> {
        let m = self.raw.mesh.as_ref().ok_or_else(|| ConfigError::plain("missing [mesh] block"))?;
        let r = match m.tail_radius {
            Some(r) => Mesh::with_tail_radius(m.a, m.b, m.n, r),
            None => Mesh::new(m.a, m.b, m.n),
        };
        self.core(None, r).map_err(|e| ConfigError::plain(format!("[mesh]: {}", e.msg)))
    }

    fn build_nfunction(&self, block: &NFunctionBlock) -> CResult<NFunction> {
        let span = block.family.span();
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| self.at(span.clone(), format!("family '{}' needs '{name}'", block.family.get_ref())))
        };
        let r = match block.family.get_ref().as_str() {
            "power" => NFunction::construct(FamilyKind::Power, &[need(block.p, "p")?]),
            "power_log" => NFunction::construct(FamilyKind::PowerLog, &[need(block.p, "p")?]),
            "power_sum" => NFunction::construct(FamilyKind::PowerSum, &[need(block.p, "p")?, need(block.q, "q")?]),
            "tabulated" => {
                let file = block
                    .file
                    .as_ref()
                    .ok_or_else(|| self.at(span.clone(), "family 'tabulated' needs 'file'"))?;
                NFunction::from_table_file(self.resolve(file))
            }
            other => {
                return Err(self.at(
                    span,
                    format!("unknown family '{other}' (power, power_sum, power_log, tabulated)"),
                ))
            }
        };
        self.core(Some(span), r)
    }

    pub fn nfunction(&self) -> CResult<NFunction> {
        let b = self.raw.nfunction.as_ref().ok_or_else(|| ConfigError::plain("missing [nfunction] block"))?;
        self.build_nfunction(b)
    }

    fn expr(&self, src: &Spanned<String>, nonlinear: bool) -> CResult<Expr> {
        let parsed = if nonlinear {
            Expr::parse_nonlinearity(src.get_ref())
        } else {
            Expr::parse(src.get_ref())
        };
        parsed.map_err(|e| self.in_string(src.span(), e.offset, e.msg))
    }

    /// Grid function from a number, an expression in `x` or a file.
    pub fn grid_function(&self, src: &Spanned<Source>, mesh: Mesh) -> CResult<GridFunction> {
        let span = src.span();
        match src.get_ref() {
            Source::Number(c) => self.core(Some(span), GridFunction::constant(mesh, *c)),
            Source::Text(text) => {
                let e = self.expr(&Spanned::new(span.clone(), text.clone()), false)?;
                self.core(Some(span), GridFunction::from_fn(mesh, |x| e.eval(x, 0.0)))
            }
            Source::File { file } => self.core(Some(span), GridFunction::read(mesh, self.resolve(file))),
        }
    }

    fn problem_block(&self) -> CResult<&ProblemBlock> {
        self.raw.problem.as_ref().ok_or_else(|| ConfigError::plain("missing [problem] block"))
    }

    /// Whether `[problem] preset = "torsion"` is set.
    pub fn is_torsion(&self) -> bool {
        self.raw
            .problem
            .as_ref()
            .and_then(|p| p.preset.as_ref())
            .is_some_and(|p| p.get_ref() == "torsion")
    }

    /// The `[problem]` spec, optionally with `f`, `k` replaced.
    fn problem_with(&self, f: Option<&Spanned<Source>>, k: Option<&Spanned<Source>>) -> CResult<ProblemSpec> {
        let p = self.problem_block()?;
        let mesh = self.mesh()?;
        if let Some(preset) = &p.preset {
            if preset.get_ref() != "torsion" {
                return Err(self.at(preset.span(), format!("unknown preset '{}'", preset.get_ref())));
            }
            if mesh.a() != -1.0 || mesh.b() != 1.0 {
                return Err(self.at(preset.span(), "the torsion preset needs a = -1, b = 1"));
            }
            let spec = self.core(Some(preset.span()), torsion_spec(mesh.n(), p.s))?;
            return Ok(spec);
        }
        fn need<'s>(v: Option<&'s Spanned<Source>>, name: &str) -> CResult<&'s Spanned<Source>> {
            v.ok_or_else(|| ConfigError::plain(format!("[problem] needs '{name}'")))
        }
        let f = self.grid_function(need(f.or(p.f.as_ref()), "f")?, mesh)?;
        let k = self.grid_function(need(k.or(p.k.as_ref()), "k")?, mesh)?;
        let alpha = p.alpha.ok_or_else(|| ConfigError::plain("[problem] needs 'alpha'"))?;
        let beta = p.beta.ok_or_else(|| ConfigError::plain("[problem] needs 'beta'"))?;
        let g = self.nfunction()?;
        let plain = |r: orlicz_core::Result<ProblemSpec>| self.core(None, r).map_err(|e| ConfigError::plain(format!("[problem]: {}", e.msg)));
        let mut spec = plain(ProblemSpec::new(g, p.s, alpha, beta, f, k))?;
        if p.epsilon0.is_some() || p.epsilon_min.is_some() {
            let (e0, emin) = (p.epsilon0.unwrap_or(spec.epsilon0), p.epsilon_min.unwrap_or(spec.epsilon_min));
            spec = plain(spec.with_epsilons(e0, emin))?;
        }
        if let Some(ob) = &p.obstacle {
            let ob = self.grid_function(ob, mesh)?;
            spec = self.core(p.obstacle.as_ref().map(|o| o.span()), spec.with_obstacle(ob))?;
        }
        if let Some(src) = &p.nonlinearity {
            let e = self.expr(src, true)?;
            spec = spec.with_custom(Nonlinearity::new(src.get_ref().clone(), move |x, u| e.eval(x, u)));
        }
        Ok(spec)
    }

    pub fn problem(&self) -> CResult<ProblemSpec> {
        self.problem_with(None, None)
    }

    /// The larger problem of a comparison run: `[compare]` data over `[problem]`.
    pub fn problem_high(&self) -> CResult<ProblemSpec> {
        let c = &self.raw.compare;
        if c.f.is_none() && c.k.is_none() {
            return Err(ConfigError::plain("[compare] needs 'f' or 'k'"));
        }
        self.problem_with(c.f.as_ref(), c.k.as_ref())
    }

    pub fn solver_options(&self) -> CResult<SolverOptions> {
        let mut opts = SolverOptions::default();
        if let Some(tol) = self.raw.solver.tol {
            if !(tol > 0.0) {
                return Err(ConfigError::plain("[solver] tol must be positive"));
            }
            opts.tol = tol;
        }
        opts.max_iter = self.raw.solver.max_iter;
        Ok(opts)
    }

    fn initial_guess(&self, src: &Spanned<Source>, mesh: Mesh, index: u64) -> CResult<GridFunction> {
        if let Source::Text(t) = src.get_ref() {
            if t.trim() == "random" {
                let mut rng = stream(self.seed, &["init"], index);
                return Ok(nonnegative_bump(&mesh, &mut rng).with_label("random"));
            }
        }
        self.grid_function(src, mesh)
    }

    /// `[init] guess`, default `0`.
    pub fn init(&self) -> CResult<GridFunction> {
        let mesh = self.mesh()?;
        match &self.raw.init.guess {
            Some(src) => self.initial_guess(src, mesh, 0),
            None => Ok(GridFunction::zeros(mesh)),
        }
    }

    /// `[uniqueness] inits`, default `["0.1", "1", "random"]`.
    pub fn uniqueness_inits(&self) -> CResult<Vec<GridFunction>> {
        let mesh = self.mesh()?;
        match &self.raw.uniqueness.inits {
            Some(list) => list
                .get_ref()
                .iter()
                .enumerate()
                .map(|(i, src)| self.initial_guess(src, mesh, i as u64))
                .collect(),
            None => {
                let mut rng = stream(self.seed, &["init"], 2);
                Ok(vec![
                    GridFunction::zeros(mesh).map(|_| 0.1),
                    GridFunction::zeros(mesh).map(|_| 1.0),
                    nonnegative_bump(&mesh, &mut rng),
                ])
            }
        }
    }

    /// Suites and sweep parameters of the `[verify]` block.
    pub fn sweep(&self) -> CResult<(Vec<Suite>, SweepConfig)> {
        let v = self.raw.verify.as_ref().ok_or_else(|| ConfigError::plain("missing [verify] block"))?;
        if v.suites.get_ref().is_empty() {
            return Err(self.at(v.suites.span(), "no suites selected"));
        }
        let suites = v
            .suites
            .get_ref()
            .iter()
            .map(|name| {
                name.parse::<Suite>()
                    .map_err(|_| self.at(v.suites.span(), format!("unknown suite '{name}'")))
            })
            .collect::<CResult<Vec<_>>>()?;
        let samples = *v.samples.get_ref();
        if !(samples >= 1.0 && samples.fract() == 0.0 && samples <= 1e12) {
            return Err(self.at(v.samples.span(), "samples must be a positive integer"));
        }
        let families = match &v.families {
            Some(list) => list.iter().map(|b| self.build_nfunction(b)).collect::<CResult<Vec<_>>>()?,
            None => self.core(None, default_families())?,
        };
        if families.is_empty() {
            return Err(ConfigError::plain("[verify] families is empty"));
        }
        Ok((
            suites,
            SweepConfig {
                seed: self.seed,
                samples: samples as usize,
                families,
            },
        ))
    }

    pub fn norm(&self) -> CResult<(GridFunction, NormKind, Option<f64>)> {
        let b = self.raw.norm.as_ref().ok_or_else(|| ConfigError::plain("missing [norm] block"))?;
        let kind = match b.kind.get_ref().as_str() {
            "LG" | "lg" => NormKind::Lg,
            "seminorm_omega" => NormKind::SeminormOmega,
            "seminorm_full" => NormKind::SeminormFull,
            other => {
                return Err(self.at(
                    b.kind.span(),
                    format!("unknown norm kind '{other}' (LG, seminorm_omega, seminorm_full)"),
                ))
            }
        };
        let s = b.s.or(self.raw.problem.as_ref().map(|p| p.s));
        if kind != NormKind::Lg && s.is_none() {
            return Err(self.at(b.kind.span(), "seminorms need 's'"));
        }
        let u = self.grid_function(&b.u, self.mesh()?)?;
        Ok((u, kind, s))
    }
}
