//! Subcommand bodies.

use orlicz_core::grid::{lg_norm, seminorm, GridFunction, SgDomain};
use orlicz_core::lab::{run_suite, InequalityReport};
use orlicz_core::solver::{
    comparison_experiment, membership_checks, minimize_j, solve_general, solve_singular, symmetry_experiment,
    torsion_error, uniqueness_experiment, ProblemSpec, SolveResult, SolverOptions, SYMMETRY_THRESHOLD,
    UNIQUENESS_THRESHOLD,
};

use crate::config::{Config, NormKind};
use crate::{CliError, Command, Exit, RunContext};

/// Result of a command before the manifest is written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: Exit,
    /// `PASS ...`, `FAIL ...` or `INCONCLUSIVE ...`.
    pub verdict: Option<String>,
    /// Files written, relative to the output directory.
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
    /// Lines for the diagnostic stream.
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            exit: Exit::Success,
            verdict: None,
            outputs: Vec::new(),
            warnings: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn write(&mut self, ctx: &RunContext, name: &str, contents: &str) -> Result<(), CliError> {
        std::fs::write(ctx.out_dir.join(name), contents)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn warn(&mut self, lines: impl IntoIterator<Item = String>) {
        for l in lines {
            if !self.warnings.contains(&l) {
                self.warnings.push(l);
            }
        }
    }
}

pub(crate) fn dispatch(command: Command, config: &Config, ctx: &RunContext) -> Result<Outcome, CliError> {
    match command {
        Command::Verify => verify(config, ctx),
        Command::Solve => solve(config, ctx),
        Command::Compare => compare(config, ctx),
        Command::Uniqueness => uniqueness(config, ctx),
        Command::Symmetry => symmetry(config, ctx),
        Command::Norm => norm(config, ctx),
    }
}

fn verify(config: &Config, ctx: &RunContext) -> Result<Outcome, CliError> {
    let (suites, sweep) = config.sweep()?;
    let mut out = Outcome::new();
    let mut csv = format!("{}\n", InequalityReport::CSV_HEADER);
    let mut notes = String::new();
    let mut failing = Vec::new();
    for suite in suites {
        let report = run_suite(suite, &sweep)?;
        let witness = if report.witness.is_empty() || report.passed() {
            "-".to_string()
        } else {
            let name = format!("witness_{}.txt", report.name);
            out.write(ctx, &name, &report.witness.to_text())?;
            name
        };
        let row = report.csv_row(&witness);
        ctx.info(&row);
        csv.push_str(&row);
        csv.push('\n');
        notes.push_str(&format!("{}.tolerance = {}\n", report.name, report.tolerance));
        for (k, v) in &report.notes {
            notes.push_str(&format!("{}.{k} = {v}\n", report.name));
        }
        if !report.passed() {
            failing.push(format!("{} ({} violations)", report.name, report.violations));
        }
    }
    out.write(ctx, "report.csv", &csv)?;
    out.write(ctx, "notes.txt", &notes)?;
    if failing.is_empty() {
        out.verdict = Some("PASS all suites".into());
    } else {
        out.exit = Exit::Fail;
        out.verdict = Some(format!("FAIL {}", failing.join(", ")));
        out.diagnostics = failing.iter().map(|f| format!("failing suite: {f}")).collect();
    }
    Ok(out)
}

fn check_converged(out: &mut Outcome, results: &[&SolveResult]) -> bool {
    if results.iter().all(|r| r.converged) {
        return true;
    }
    out.exit = Exit::Inconclusive;
    out.verdict = Some("INCONCLUSIVE solver did not converge (see trace)".into());
    false
}

fn advisory(spec: &ProblemSpec) -> Vec<String> {
    membership_checks(spec).into_iter().map(|m| format!("advisory: {m}")).collect()
}

fn solve(config: &Config, ctx: &RunContext) -> Result<Outcome, CliError> {
    let spec = config.problem()?;
    let opts: SolverOptions = config.solver_options()?;
    let init = config.init()?;
    let mut out = Outcome::new();
    let result = if config.is_torsion() {
        // data independent of u: a single ε stage is exact
        minimize_j(&spec, spec.epsilon_min, &init, opts)?
    } else if spec.custom.is_some() {
        solve_general(&spec, &init, opts)?
    } else {
        out.warn(advisory(&spec));
        solve_singular(&spec, &init, opts)?
    };
    out.warn(result.warnings.iter().cloned());
    out.write(ctx, "solution.txt", &result.u.to_text())?;
    out.write(ctx, "trace.txt", &result.stats_text())?;
    ctx.info(format!("residual_inf = {:e}", result.residual_inf));
    if config.is_torsion() {
        let err = torsion_error(&result.u, spec.s);
        ctx.info(format!("torsion relative L2 error = {err:e}"));
        out.write(ctx, "torsion_error.txt", &format!("{err:e}\n"))?;
    }
    if check_converged(&mut out, &[&result]) {
        out.verdict = Some(format!("SOLVED residual_inf={:e}", result.residual_inf));
    }
    Ok(out)
}

fn compare(config: &Config, ctx: &RunContext) -> Result<Outcome, CliError> {
    let low = config.problem()?;
    let high = config.problem_high()?;
    let c = comparison_experiment(&low, &high, &config.init()?, config.solver_options()?)?;
    let mut out = Outcome::new();
    out.warn(c.low.warnings.iter().cloned());
    out.warn(c.high.warnings.iter().cloned());
    out.warn(c.notes.iter().map(|n| format!("advisory: {n}")));
    out.write(ctx, "u_low.txt", &c.low.u.to_text())?;
    out.write(ctx, "u_high.txt", &c.high.u.to_text())?;
    out.write(ctx, "trace_low.txt", &c.low.stats_text())?;
    out.write(ctx, "trace_high.txt", &c.high.stats_text())?;
    if !check_converged(&mut out, &[&c.low, &c.high]) {
        return Ok(out);
    }
    let metric = format!("violated_nodes={} tol_cmp={:e}", c.violated_nodes.len(), c.tol_cmp);
    if c.passed() {
        out.verdict = Some(format!("PASS {metric}"));
    } else {
        out.exit = Exit::Fail;
        out.verdict = Some(format!("FAIL {metric}"));
        out.diagnostics = vec![format!("violated nodes: {:?}", c.violated_nodes)];
    }
    Ok(out)
}

fn uniqueness(config: &Config, ctx: &RunContext) -> Result<Outcome, CliError> {
    let spec = config.problem()?;
    let u = uniqueness_experiment(&spec, &config.uniqueness_inits()?, config.solver_options()?)?;
    let mut out = Outcome::new();
    if u.out_of_hypothesis {
        out.warn([format!(
            "out-of-hypothesis: uniqueness needs beta < p- - 1 (beta = {}, p- = {})",
            spec.beta,
            spec.g.p_minus()
        )]);
    }
    out.warn(advisory(&spec));
    for (i, r) in u.results.iter().enumerate() {
        out.warn(r.warnings.iter().cloned());
        out.write(ctx, &format!("u_{i}.txt"), &r.u.to_text())?;
        out.write(ctx, &format!("trace_{i}.txt"), &r.stats_text())?;
    }
    let refs: Vec<&SolveResult> = u.results.iter().collect();
    if !check_converged(&mut out, &refs) {
        return Ok(out);
    }
    let metric = format!("max_distance={:e} threshold={UNIQUENESS_THRESHOLD:e}", u.max_distance);
    if u.passed() {
        out.verdict = Some(format!("PASS {metric}"));
    } else {
        out.exit = Exit::Fail;
        out.verdict = Some(format!("FAIL {metric}"));
    }
    Ok(out)
}

fn symmetry(config: &Config, ctx: &RunContext) -> Result<Outcome, CliError> {
    let spec = config.problem()?;
    let init = config.init()?;
    let s = symmetry_experiment(&spec, &init, config.solver_options()?)?;
    let mut out = Outcome::new();
    out.warn(s.result.warnings.iter().cloned());
    out.warn(advisory(&spec));
    out.write(ctx, "solution.txt", &s.result.u.to_text())?;
    out.write(ctx, "trace.txt", &s.result.stats_text())?;
    let init_asym = init
        .values()
        .iter()
        .zip(init.reflected().values())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    ctx.info(format!("initial asymmetry = {init_asym:e}"));
    if !check_converged(&mut out, &[&s.result]) {
        return Ok(out);
    }
    let metric = format!("asymmetry={:e} threshold={SYMMETRY_THRESHOLD:e}", s.asymmetry);
    if !s.symmetric_data {
        out.warn(["data not reflection symmetric: control run".to_string()]);
        out.verdict = Some(format!("CONTROL {metric}"));
    } else if s.passed() {
        out.verdict = Some(format!("PASS {metric}"));
    } else {
        out.exit = Exit::Fail;
        out.verdict = Some(format!("FAIL {metric}"));
    }
    Ok(out)
}

fn norm(config: &Config, ctx: &RunContext) -> Result<Outcome, CliError> {
    let g = config.nfunction()?;
    let (u, kind, s): (GridFunction, NormKind, Option<f64>) = config.norm()?;
    let lux = match kind {
        NormKind::Lg => lg_norm(&u, &g)?,
        NormKind::SeminormOmega => seminorm(&u, &g, s.unwrap_or_default(), SgDomain::OmegaOmega)?,
        NormKind::SeminormFull => seminorm(&u, &g, s.unwrap_or_default(), SgDomain::FullSpace)?,
    };
    let mut out = Outcome::new();
    let line = format!("norm = {:.5} value = {:e} residual = {:e}", lux.norm, lux.norm, lux.residual);
    out.write(ctx, "norm.txt", &format!("{line}\n"))?;
    out.verdict = Some(line);
    Ok(out)
}
