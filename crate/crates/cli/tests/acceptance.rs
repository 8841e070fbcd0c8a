//! Acceptance criteria: one PASS/FAIL line each, nonzero exit on any FAIL.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use orlicz_core::grid::{lg_norm, seminorm, GridFunction, Mesh, SgDomain};
use orlicz_core::lab::{
    default_families, diaz_saa_scale, diaz_saa_value, hidden_convexity_gap, picone_regime_counts, run_suite, Suite,
    SweepConfig,
};
use orlicz_core::nfunction::NFunction;
use orlicz_core::sampling::{fourier_bump, nonnegative_bump, positive_bump, stream};
use orlicz_core::solver::{
    comparison_experiment, energy_j, solve_torsion, symmetry_experiment, uniqueness_experiment, weak_residual,
    ProblemSpec, SolverOptions, SYMMETRY_THRESHOLD, UNIQUENESS_THRESHOLD,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn check(name: &str, budget: Duration, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let pass = v.pass && in_time;
    println!(
        "{} {name}: {} [{:.1}s of {}s budget]",
        if pass { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn spec(mesh: Mesh, f: f64, k: f64) -> ProblemSpec {
    ProblemSpec::new(
        NFunction::power(3.0).unwrap(),
        0.5,
        0.5,
        0.5,
        GridFunction::constant(mesh, f).unwrap(),
        GridFunction::constant(mesh, k).unwrap(),
    )
    .unwrap()
}

fn inequality_suites() -> Verdict {
    let cfg = SweepConfig::new(20240611, 100_000).unwrap();
    let mut failing = Vec::new();
    let mut min_samples = u64::MAX;
    let mut regimes = [0u64; 4];
    for suite in Suite::ALL {
        let r = run_suite(suite, &cfg).unwrap();
        min_samples = min_samples.min(r.samples);
        if !r.passed() {
            failing.push(format!("{}={}", r.name, r.violations));
        }
        if let Some(c) = picone_regime_counts(&r) {
            regimes = c;
        }
    }
    let regimes_ok = regimes.iter().all(|&c| c >= 10_000);
    Verdict {
        pass: failing.is_empty() && min_samples >= 100_000 && regimes_ok,
        detail: format!(
            "9 suites, >= {min_samples} samples each, violations: {}, picone regimes {regimes:?}",
            if failing.is_empty() { "none".to_string() } else { failing.join(" ") }
        ),
    }
}

fn torsion() -> Verdict {
    let errs: Vec<f64> = [100, 200, 400]
        .iter()
        .map(|&n| {
            let (r, e) = solve_torsion(n, 0.5, SolverOptions::default()).unwrap();
            if r.converged {
                e
            } else {
                f64::NAN
            }
        })
        .collect();
    Verdict {
        pass: errs[2] < 0.05 && errs[0] > errs[1] && errs[1] > errs[2],
        detail: format!("relative L2 error n=100/200/400: {:.3e} {:.3e} {:.3e}", errs[0], errs[1], errs[2]),
    }
}

fn gradient_consistency() -> Verdict {
    let mesh = Mesh::new(0.0, 1.0, 32).unwrap();
    let eps = 1e-3;
    let t = 1e-6;
    let mut worst = 0.0_f64;
    let mut pairs = 0;
    for g in default_families().unwrap() {
        let label = g.to_string();
        let spec = ProblemSpec::new(
            g,
            0.5,
            0.5,
            0.5,
            GridFunction::constant(mesh, 1.0).unwrap(),
            GridFunction::constant(mesh, 1.0).unwrap(),
        )
        .unwrap();
        let mut rng = stream(99, &["gradient", &label], 0);
        for _ in 0..100 {
            let u = positive_bump(&mesh, &mut rng);
            let phi = fourier_bump(&mesh, &mut rng);
            let shifted = |c: f64| {
                let vals = u.values().iter().zip(phi.values()).map(|(a, b)| a + c * b).collect();
                GridFunction::new(mesh, vals).unwrap()
            };
            let grad = weak_residual(&u, &spec, eps).unwrap();
            let exact: f64 = grad.values().iter().zip(phi.values()).map(|(a, b)| a * b).sum();
            let fd = (energy_j(&shifted(t), &spec, eps).unwrap() - energy_j(&shifted(-t), &spec, eps).unwrap()) / (2.0 * t);
            worst = worst.max((fd - exact).abs() / exact.abs());
            pairs += 1;
        }
    }
    Verdict {
        pass: worst < 1e-5,
        detail: format!("{pairs} pairs over 4 families, worst relative error {worst:.2e} (< 1e-5)"),
    }
}

fn uniqueness() -> Verdict {
    let mesh = Mesh::new(0.0, 1.0, 200).unwrap();
    let spec = spec(mesh, 1.0, 1.0);
    let mut rng = stream(1, &["init"], 2);
    let inits = vec![
        GridFunction::constant(mesh, 0.1).unwrap(),
        GridFunction::constant(mesh, 1.0).unwrap(),
        nonnegative_bump(&mesh, &mut rng),
    ];
    let u = uniqueness_experiment(&spec, &inits, SolverOptions::default()).unwrap();
    Verdict {
        pass: u.passed() && spec.epsilon_min == 1e-6,
        detail: format!(
            "n=200, 3 inits, max normalized distance {:.3e} (< {UNIQUENESS_THRESHOLD:e}), converged={}",
            u.max_distance, !u.inconclusive
        ),
    }
}

fn comparison() -> Verdict {
    let mesh = Mesh::new(0.0, 1.0, 200).unwrap();
    let mut rng = stream(1, &["init"], 0);
    let init = nonnegative_bump(&mesh, &mut rng);
    let c = comparison_experiment(&spec(mesh, 1.0, 1.0), &spec(mesh, 2.0, 1.0), &init, SolverOptions::default())
        .unwrap();
    let margin = (0..mesh.n())
        .map(|i| c.high.u.at(i) - c.low.u.at(i))
        .fold(f64::INFINITY, f64::min);
    Verdict {
        pass: c.passed(),
        detail: format!(
            "f doubled, violated nodes {} at tol_cmp {:.2e}, min(u_high - u_low) {margin:.3e}",
            c.violated_nodes.len(),
            c.tol_cmp
        ),
    }
}

fn symmetry() -> Verdict {
    let mesh = Mesh::new(0.0, 1.0, 200).unwrap();
    let mut spec = spec(mesh, 1.0, 1.0);
    spec.f = GridFunction::from_fn(mesh, |x| 1.0 + (-((x - 0.5) / 0.2).powi(2)).exp()).unwrap();
    let mut rng = stream(1, &["init"], 0);
    let init = nonnegative_bump(&mesh, &mut rng);
    let init_asym = init
        .values()
        .iter()
        .zip(init.reflected().values())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    let s = symmetry_experiment(&spec, &init, SolverOptions::default()).unwrap();
    Verdict {
        pass: s.symmetric_data && s.passed() && init_asym > 0.1,
        detail: format!(
            "initial asymmetry {init_asym:.3e}, solution asymmetry {:.3e} (< {SYMMETRY_THRESHOLD:e})",
            s.asymmetry
        ),
    }
}

fn equality_cases() -> Verdict {
    let mesh = Mesh::new(0.0, 1.0, 16).unwrap();
    let mut rng = stream(5, &["equality"], 0);
    let mut worst_ds = 0.0_f64;
    for p in [3.0, 4.0] {
        let g = NFunction::power(p).unwrap();
        for _ in 0..20 {
            let u = positive_bump(&mesh, &mut rng);
            let v = u.scaled(2.0);
            let value = diaz_saa_value(&u, &v, &g, 0.5, p).unwrap();
            let scale = diaz_saa_scale(&u, &v, &g, 0.5).unwrap();
            worst_ds = worst_ds.max(value.abs() / scale);
        }
    }
    let mut hidden_zero = true;
    for g in default_families().unwrap() {
        let q = g.p_minus();
        for (u0, u1) in [((0.3, 1.2), (2.0, 0.4)), ((1.0, 1.0), (5.0, 0.01))] {
            for t in [0.0, 1.0] {
                hidden_zero &= hidden_convexity_gap(&g, q, u0, u1, t).unwrap().gap() == 0.0;
            }
        }
    }
    let mut worst_h = 0.0_f64;
    for g in default_families().unwrap() {
        for _ in 0..10 {
            let u = fourier_bump(&mesh, &mut rng);
            for lambda in [0.5, 2.0, 7.0] {
                let a = lg_norm(&u, &g).unwrap().norm;
                let b = lg_norm(&u.scaled(lambda), &g).unwrap().norm;
                worst_h = worst_h.max((b - lambda * a).abs() / (lambda * a));
                let a = seminorm(&u, &g, 0.5, SgDomain::FullSpace).unwrap().norm;
                let b = seminorm(&u.scaled(lambda), &g, 0.5, SgDomain::FullSpace).unwrap().norm;
                worst_h = worst_h.max((b - lambda * a).abs() / (lambda * a));
            }
        }
    }
    Verdict {
        pass: worst_ds < 1e-8 && hidden_zero && worst_h <= 1e-12,
        detail: format!(
            "Diaz-Saa at v=2u {worst_ds:.2e}*scale (< 1e-8), hidden convexity t in {{0,1}} exactly zero: {hidden_zero}, Luxemburg homogeneity {worst_h:.2e} (<= 1e-12)"
        ),
    }
}

fn run_cli(args: &[&str], out: &Path) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_orlicz"))
        .args(args)
        .arg("--out")
        .arg(out)
        .arg("--quiet")
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn determinism() -> Verdict {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let verify_cfg = dir.path().join("verify.toml");
    std::fs::write(
        &verify_cfg,
        "seed = 11\n[verify]\nsuites = [\"young\", \"picone\", \"diaz_saa\", \"holder\"]\nsamples = 2e3\n",
    )
    .unwrap();
    let runs: [(&str, std::path::PathBuf, &[&str]); 2] = [
        ("verify", verify_cfg, &["report.csv", "notes.txt"]),
        ("uniqueness", configs.join("uniqueness.toml"), &["u_0.txt", "u_1.txt", "u_2.txt"]),
    ];
    let mut identical = true;
    let mut files = 0;
    for (cmd, cfg, outputs) in runs {
        let cfg = cfg.to_str().unwrap();
        let a = dir.path().join(format!("{cmd}_a"));
        let b = dir.path().join(format!("{cmd}_b"));
        identical &= run_cli(&[cmd, "--config", cfg, "--seed", "5"], &a) == 0;
        identical &= run_cli(&[cmd, "--config", cfg, "--seed", "5"], &b) == 0;
        for f in outputs {
            let x = std::fs::read(a.join(f)).unwrap_or_default();
            let y = std::fs::read(b.join(f)).unwrap_or_else(|_| vec![1]);
            identical &= !x.is_empty() && x == y;
            files += 1;
        }
    }
    Verdict {
        pass: identical,
        detail: format!("two runs of verify and uniqueness with seed 5: {files} report/solution files byte-identical: {identical}"),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        check("inequality suites", secs(300), inequality_suites),
        check("torsion oracle", secs(120), torsion),
        check("gradient consistency", secs(60), gradient_consistency),
        check("uniqueness", secs(300), uniqueness),
        check("comparison", secs(300), comparison),
        check("symmetry", secs(180), symmetry),
        check("equality cases", secs(60), equality_cases),
        check("determinism", secs(300), determinism),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
