use super::*;
use crate::grid::{GridFunction, Mesh};
use crate::nfunction::NFunction;
use crate::sampling::{nonnegative_bump, positive_bump, stream};

fn spec_on(mesh: Mesh, g: NFunction, alpha: f64, beta: f64, f: f64, k: f64) -> ProblemSpec {
    ProblemSpec::new(
        g,
        0.5,
        alpha,
        beta,
        GridFunction::constant(mesh, f).unwrap(),
        GridFunction::constant(mesh, k).unwrap(),
    )
    .unwrap()
}

#[test]
fn primitive_closed_forms() {
    // α = 1, f = 1, k = 0, u = 1, ε = 1: ln 2
    assert!((primitive_singular(1.0, 0.0, 1.0, 0.0, 1.0, 1.0) - 2f64.ln()).abs() < 1e-15);
    assert!((primitive_singular(0.0, 1.0, 0.5, 1.0, 1.0, 1.0) - 1.5).abs() < 1e-15);
    assert!((primitive_singular(1.0, 0.0, 0.5, 0.0, 1.0, 3.0) - 2.0).abs() < 1e-14);
    assert_eq!(primitive_singular(1.0, 1.0, 0.5, 0.5, 0.1, 0.0), 0.0);
}

#[test]
fn energy_log_branch() {
    let mesh = Mesh::new(0.0, 2.0, 10).unwrap();
    let spec = spec_on(mesh, NFunction::power(3.0).unwrap(), 1.0, 0.5, 1.0, 0.0);
    let zero = GridFunction::zeros(mesh);
    assert_eq!(energy_j(&zero, &spec, 1.0).unwrap(), 0.0);
    let one = GridFunction::constant(mesh, 1.0).unwrap();
    let modular = crate::grid::modular_sg(&one, &spec.g, 0.5, crate::grid::SgDomain::FullSpace).unwrap();
    let j = energy_j(&one, &spec, 1.0).unwrap();
    assert!((j - (modular - 2.0 * 2f64.ln())).abs() < 1e-12);
}

#[test]
fn residual_trivial_and_odd() {
    let mesh = Mesh::new(-1.0, 1.0, 30).unwrap();
    let spec = spec_on(mesh, NFunction::power_sum(3.0, 4.0).unwrap(), 0.5, 0.5, 0.0, 0.0);
    let r = weak_residual(&GridFunction::zeros(mesh), &spec, 0.1).unwrap();
    assert!(r.values().iter().all(|&v| v == 0.0));
    let mut rng = stream(2, &[], 0);
    let u = crate::sampling::fourier_bump(&mesh, &mut rng);
    let a = weak_residual(&u, &spec, 0.1).unwrap();
    let b = weak_residual(&u.scaled(-1.0), &spec, 0.1).unwrap();
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((x + y).abs() <= 1e-14 * x.abs().max(1e-300));
    }
}

#[test]
fn gradient_matches_central_differences() {
    let mesh = Mesh::new(0.0, 1.0, 24).unwrap();
    let mut rng = stream(5, &[], 0);
    for g in crate::lab::default_families().unwrap() {
        let spec = spec_on(mesh, g, 0.5, 0.5, 1.0, 1.0);
        for _ in 0..10 {
            let u = positive_bump(&mesh, &mut rng);
            let phi = crate::sampling::fourier_bump(&mesh, &mut rng);
            let grad = weak_residual(&u, &spec, 1e-3).unwrap();
            let dd: f64 = grad.values().iter().zip(phi.values()).map(|(a, b)| a * b).sum();
            let t = 1e-6;
            let plus = energy_j(&GridFunction::new(mesh, u.values().iter().zip(phi.values()).map(|(a, b)| a + t * b).collect()).unwrap(), &spec, 1e-3).unwrap();
            let minus = energy_j(&GridFunction::new(mesh, u.values().iter().zip(phi.values()).map(|(a, b)| a - t * b).collect()).unwrap(), &spec, 1e-3).unwrap();
            let fd = (plus - minus) / (2.0 * t);
            let scale = dd.abs().max(energy_j(&u, &spec, 1e-3).unwrap().abs());
            assert!((fd - dd).abs() < 1e-5 * scale, "{} fd {fd} vs {dd}", spec.g);
        }
    }
}

#[test]
fn zero_data_gives_zero() {
    let mesh = Mesh::new(0.0, 1.0, 16).unwrap();
    let spec = spec_on(mesh, NFunction::power(3.0).unwrap(), 0.5, 0.5, 0.0, 0.0);
    let init = GridFunction::constant(mesh, 0.7).unwrap();
    let r = minimize_j(&spec, 0.1, &init, SolverOptions::default()).unwrap();
    assert!(r.converged);
    // g(t) = t² degenerates at 0, so a gradient of size tol leaves u of order √tol
    assert!(r.u.sup_norm() < 1e-4, "{}", r.u.sup_norm());
    assert!(r.energy_trace.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12 * w[0].1.abs().max(1.0)));
}

#[test]
fn obstacle_kkt() {
    let mesh = Mesh::new(0.0, 1.0, 32).unwrap();
    let free = spec_on(mesh, NFunction::power(3.0).unwrap(), 0.5, 0.5, 1.0, 1.0);
    let peak = minimize_j(&free, 1e-3, &GridFunction::zeros(mesh), SolverOptions::default())
        .unwrap()
        .u
        .sup_norm();
    let cap = 0.8 * peak;
    let ob = GridFunction::constant(mesh, cap).unwrap();
    let spec = free.with_obstacle(ob).unwrap();
    let opts = SolverOptions::default();
    let r = minimize_j(&spec, 1e-3, &GridFunction::zeros(mesh), opts).unwrap();
    assert!(r.converged);
    let grad = weak_residual(&r.u, &spec, 1e-3).unwrap();
    let mut active = 0;
    for i in 0..mesh.n() {
        let (u, gi) = (r.u.at(i), grad.at(i));
        assert!((0.0..=cap).contains(&u));
        if u == cap {
            active += 1;
            assert!(gi <= opts.tol);
        } else if u > 0.0 {
            assert!(gi.abs() <= opts.tol);
        }
    }
    assert!(active > 0 && active < mesh.n(), "active {active}: {:?}", r.u.values());
}

#[test]
fn continuation_positive_solution() {
    let mesh = Mesh::new(0.0, 1.0, 32).unwrap();
    let spec = spec_on(mesh, NFunction::power(3.0).unwrap(), 0.5, 0.5, 1.0, 1e-6)
        .with_epsilons(0.1, 1e-4)
        .unwrap();
    let r = solve_singular(&spec, &GridFunction::constant(mesh, 0.1).unwrap(), SolverOptions::default()).unwrap();
    assert!(r.converged, "{}", r.stats_text());
    assert!(r.u.values().iter().all(|&v| v > 0.0));
    assert_eq!(r.epsilon_trace.len(), super::minimize::epsilon_schedule(0.1, 1e-4).len());
    assert_eq!(r.epsilon_trace.last().unwrap().epsilon, 1e-4);
}

#[test]
fn general_path_matches_singular() {
    let mesh = Mesh::new(0.0, 1.0, 24).unwrap();
    let base = spec_on(mesh, NFunction::power(3.0).unwrap(), 0.5, 0.5, 1.0, 1.0).with_epsilons(0.1, 1e-3).unwrap();
    let custom = base
        .clone()
        .with_custom(Nonlinearity::new("u^-0.5 + u^0.5", |_, u: f64| u.powf(-0.5) + u.sqrt()));
    let init = GridFunction::constant(mesh, 0.2).unwrap();
    let opts = SolverOptions::default();
    let a = solve_singular(&base, &init, opts).unwrap();
    let b = solve_general(&custom, &init, opts).unwrap();
    let d = a.u.values().iter().zip(b.u.values()).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    assert!(d < 1e-8, "{d}");
}

#[test]
fn general_path_rejects_f2_failure() {
    let mesh = Mesh::new(0.0, 1.0, 16).unwrap();
    let spec = spec_on(mesh, NFunction::power(3.0).unwrap(), 0.5, 0.5, 1.0, 1.0)
        .with_custom(Nonlinearity::new("u^3", |_, u: f64| u.powi(3)));
    let r = solve_general(&spec, &GridFunction::zeros(mesh), SolverOptions::default());
    assert!(matches!(r, Err(crate::Error::Nonlinearity(_))));
}

#[test]
fn symmetric_data_symmetric_solution() {
    let mesh = Mesh::new(-1.0, 1.0, 24).unwrap();
    let spec = spec_on(mesh, NFunction::power(3.0).unwrap(), 0.5, 0.5, 1.0, 1.0).with_epsilons(0.1, 1e-3).unwrap();
    let mut rng = stream(6, &[], 0);
    let init = nonnegative_bump(&mesh, &mut rng);
    let r = symmetry_experiment(&spec, &init, SolverOptions::default()).unwrap();
    assert!(r.symmetric_data && r.result.converged);
    assert!(r.asymmetry < 1e-6, "{}", r.asymmetry);
}

#[test]
fn torsion_constant() {
    assert!((torsion_forcing(0.5) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(torsion_exact(0.0, 0.5), 1.0);
}
