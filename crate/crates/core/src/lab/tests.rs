use super::*;
use crate::grid::{GridFunction, Mesh};
use crate::interp::log_grid;
use crate::nfunction::NFunction;
use crate::sampling::{positive_bump, stream};

fn p3() -> NFunction {
    NFunction::power(3.0).unwrap()
}

#[test]
fn hidden_convexity_endpoints_are_exact() {
    let g = NFunction::power_sum(3.0, 4.0).unwrap();
    for t in [0.0, 1.0] {
        let gap = hidden_convexity_gap(&g, 2.5, (0.3, 1.7), (2.0, 0.1), t).unwrap();
        assert_eq!(gap.gap(), 0.0);
    }
    let same = hidden_convexity_gap(&g, 2.5, (0.3, 1.7), (0.3, 1.7), 0.4).unwrap();
    assert!(same.gap().abs() <= 1e-15 * same.rhs);
    assert!(hidden_convexity_gap(&g, 3.5, (0.3, 1.7), (2.0, 0.1), 0.5).is_err());
}

#[test]
fn picone_trivial_cases() {
    let g = NFunction::power_log(3.0).unwrap();
    let equal_u = picone_gap(&g, 1.4, (2.0, 2.0), (0.5, 3.0)).unwrap();
    assert_eq!(equal_u.lhs, 0.0);
    assert!(equal_u.gap() >= 0.0);
    let zero_v = picone_gap(&g, 1.4, (2.0, 0.5), (0.0, 0.0)).unwrap();
    assert_eq!((zero_v.lhs, zero_v.rhs), (0.0, 0.0));
}

#[test]
fn picone_power_constant_is_sharp() {
    // For Power(p) with q = p the inequality is an identity at v = u.
    let g = p3();
    assert_eq!(picone_constant(&g), 1.0);
    let gap = picone_gap(&g, 3.0, (0.5, 0.8), (0.5, 0.8)).unwrap();
    assert!(gap.gap().abs() < 1e-14, "{gap:?}");
}

#[test]
fn picone_swap_symmetry() {
    let mut rng = stream(9, &[], 0);
    use rand::Rng;
    for g in default_families().unwrap() {
        for _ in 0..2500 {
            let q = rng.random_range(1.01..g.p_minus());
            let u = (rng.random_range(0.01..5.0), rng.random_range(0.01..5.0));
            let v = (rng.random_range(0.0..5.0), rng.random_range(0.0..5.0));
            let a = picone_gap(&g, q, u, v).unwrap();
            let b = picone_gap(&g, q, (u.1, u.0), (v.1, v.0)).unwrap();
            assert!((a.lhs - b.lhs).abs() <= 1e-12 * (1.0 + a.lhs.abs()));
            assert!((a.rhs - b.rhs).abs() <= 1e-12 * (1.0 + a.rhs.abs()));
        }
    }
}

#[test]
fn monotone_difference_examples() {
    let g = NFunction::power(2.0).unwrap();
    let (lhs, ratio) = monotone_difference_gap(&g, -1.0, 1.0);
    assert_eq!(lhs, 4.0);
    assert_eq!(ratio, Some(2.0));
    assert_eq!(monotone_difference_gap(&g, 0.7, 0.7), (0.0, None));
}

#[test]
fn monotone_difference_constant_power_three() {
    // inf of 3(1 − x|x|)/(1 − x)² over x < 1 is 3/2, attained at x = −1
    let cfg = SweepConfig {
        seed: 1,
        samples: 1_000_000,
        families: vec![p3()],
    };
    let r = run_suite(Suite::MonotoneDifference, &cfg).unwrap();
    assert_eq!(r.violations, 0);
    let c: f64 = r.note("Power(3).C_est").unwrap().parse().unwrap();
    assert!((1.5 - 1e-12..1.5 + 1e-3).contains(&c), "{c}");
}

#[test]
fn diaz_saa_equality_and_symmetry() {
    let mesh = Mesh::new(0.0, 1.0, 16).unwrap();
    let mut rng = stream(4, &[], 0);
    let u = positive_bump(&mesh, &mut rng);
    let v = positive_bump(&mesh, &mut rng);
    let g = p3();
    assert_eq!(diaz_saa_value(&u, &u, &g, 0.5, 2.0).unwrap(), 0.0);
    let a = diaz_saa_value(&u, &v, &g, 0.5, 2.5).unwrap();
    let b = diaz_saa_value(&v, &u, &g, 0.5, 2.5).unwrap();
    assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    assert!(a > 0.0);
    // proportional pair, homogeneous G and q = p: equality
    let w = u.scaled(2.0);
    let scale = diaz_saa_scale(&u, &w, &g, 0.5).unwrap();
    let val = diaz_saa_value(&w, &u, &g, 0.5, 3.0).unwrap();
    assert!(val.abs() < 1e-8 * scale, "{val} vs {scale}");
    let bad = GridFunction::zeros(mesh);
    assert!(diaz_saa_value(&bad, &u, &g, 0.5, 2.0).is_err());
}

#[test]
fn ray_probe_cases() {
    let mesh = Mesh::new(0.0, 1.0, 24).unwrap();
    let mut rng = stream(8, &[], 0);
    let u0 = positive_bump(&mesh, &mut rng);
    let u1 = positive_bump(&mesh, &mut rng);
    let g = p3();
    let same = ray_convexity_probe(&u0, &u0, 0.3, &g, 0.5, 2.0).unwrap();
    assert!(same.gap.abs() <= 1e-12 * same.w_values.0);
    let ray = ray_convexity_probe(&u0, &u0.scaled(3.0), 0.3, &g, 0.5, 3.0).unwrap();
    assert!(ray.gap.abs() <= 1e-8 * ray.w_values.1, "{ray:?}");
    let strict = ray_convexity_probe(&u0, &u1, 0.5, &g, 0.5, 2.0).unwrap();
    assert!(strict.gap > 1e-3 * strict.w_values.2, "{strict:?}");
}

#[test]
fn fc_examples() {
    let r = fc_check(&FCFunction::power(2.5), &default_fc_samples());
    assert!(r.ok && (r.theta1 - 2.5).abs() < 1e-12 && (r.theta2 - 2.5).abs() < 1e-12);
    assert!(!fc_check(&FCFunction::power(0.5), &default_fc_samples()).ok);
    let e = FCFunction::new(|x: f64| x.exp_m1(), f64::exp);
    let r = fc_check(&e, &log_grid(1e-3, 10.0, 100));
    assert!(r.ok && r.theta1 >= 1.0 - 1e-6 && r.theta2.is_finite());
}

#[test]
fn f2_examples() {
    let xs = [0.1, 0.5, 0.9];
    let ss = log_grid(1e-4, 1e4, 200);
    let pm = 3.0;
    assert!(f2_monotonicity_check(|_, s: f64| s.powf(1.5), &xs, &ss, pm));
    assert!(f2_monotonicity_check(|_, s: f64| s.powf(pm - 1.0), &xs, &ss, pm));
    assert!(!f2_monotonicity_check(|_, s: f64| s.powf(pm), &xs, &ss, pm));
}

#[test]
fn truncation_values() {
    assert_eq!(truncation(3.0, 2.0), 2.0);
    assert_eq!(truncation(1.0, 2.0), 1.0);
}

#[test]
fn small_sweeps_are_green_and_reproducible() {
    let cfg = SweepConfig::new(7, 600).unwrap();
    for suite in Suite::ALL {
        let a = run_suite(suite, &cfg).unwrap();
        assert_eq!(a.violations, 0, "{suite:?}: {}", a.witness.to_text());
        assert_eq!(a.samples, 2400);
        let b = run_suite(suite, &cfg).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("nope".parse::<Suite>().is_err());
}
