use super::*;
use crate::nfunction::{complementary, NFunction, DEFAULT_TABLE_POINTS};
use crate::sampling::{fourier_bump, stream};

fn unit(n: usize) -> Mesh {
    Mesh::new(0.0, 1.0, n).unwrap()
}

#[test]
fn mesh_validation() {
    assert!(Mesh::new(0.0, 1.0, 7).is_err());
    assert!(Mesh::new(1.0, 0.0, 10).is_err());
    assert!(Mesh::with_tail_radius(0.0, 1.0, 10, 5.0).is_err());
    let m = unit(10);
    assert_eq!(m.h(), 0.1);
    assert!(m.nodes().iter().all(|&x| x > 0.0 && x < 1.0));
    let (l, r) = m.boundary_distances(0);
    assert!((l - 0.05).abs() < 1e-15 && (r - 0.95).abs() < 1e-15);
}

#[test]
fn modular_g_examples() {
    let m = unit(16);
    let g = NFunction::power(2.0).unwrap();
    assert_eq!(modular_g(&GridFunction::zeros(m), &g), 0.0);
    assert!((modular_g(&GridFunction::constant(m, 1.0).unwrap(), &g) - 0.5).abs() < 1e-15);
    let mut prev = f64::INFINITY;
    for n in [16, 32, 64] {
        let u = GridFunction::from_fn(unit(n), |x| x).unwrap();
        let err = (modular_g(&u, &g) - 1.0 / 6.0).abs();
        assert!(err < 0.5 * prev);
        prev = err;
    }
    assert!(prev < 1e-4);
}

#[test]
fn modular_sg_trivial_cases() {
    let m = unit(20);
    let g = NFunction::power(3.0).unwrap();
    let z = GridFunction::zeros(m);
    for d in [SgDomain::OmegaOmega, SgDomain::FullSpace] {
        assert_eq!(modular_sg(&z, &g, 0.5, d).unwrap(), 0.0);
    }
    let c = GridFunction::constant(m, 2.0).unwrap();
    assert_eq!(modular_sg(&c, &g, 0.5, SgDomain::OmegaOmega).unwrap(), 0.0);
    assert!(modular_sg(&c, &g, 0.5, SgDomain::FullSpace).unwrap() > 0.0);
    assert!(modular_sg(&c, &g, 1.0, SgDomain::FullSpace).is_err());
}

#[test]
fn full_space_dominates() {
    let g = NFunction::power_sum(3.0, 4.0).unwrap();
    let m = unit(40);
    let mut rng = stream(3, &[], 0);
    for _ in 0..20 {
        let u = fourier_bump(&m, &mut rng);
        let oo = modular_sg(&u, &g, 0.4, SgDomain::OmegaOmega).unwrap();
        let fs = modular_sg(&u, &g, 0.4, SgDomain::FullSpace).unwrap();
        assert!(fs >= oo);
    }
}

#[test]
fn tail_matches_quadrature() {
    let g = NFunction::power_log(3.0).unwrap();
    let m = Mesh::with_tail_radius(0.0, 1.0, 10, 50.0).unwrap();
    let k = PairKernel::new(&m, 0.3).unwrap();
    let c = 1.7;
    let (dl, dr) = m.boundary_distances(2);
    let side = |d: f64| crate::quadrature::integrate(|x| g.value(c * (-0.3 * x).exp()), d.ln(), 50f64.ln(), 0.0, 1e-13, 200).value;
    let exact = side(dl) + side(dr);
    assert!((k.tail(&g, 2, c) - exact).abs() < 1e-10 * exact);
    let fd = (k.tail(&g, 2, c + 1e-6) - k.tail(&g, 2, c - 1e-6)) / 2e-6;
    assert!((k.tail_deriv(&g, 2, c) - fd).abs() < 1e-6 * fd.abs());
}

#[test]
fn sg_self_convergence() {
    let g = NFunction::power(2.0).unwrap();
    let f = |x: f64| (-((x - 0.5) / 0.15).powi(2)).exp();
    let at = |n: usize| modular_sg(&GridFunction::from_fn(unit(n), f).unwrap(), &g, 0.5, SgDomain::FullSpace).unwrap();
    let coarse = at(200);
    let fine = at(2000);
    assert!((coarse - fine).abs() < 0.01 * fine, "{coarse} vs {fine}");
    // observed order of the n vs 2n differences; min(1, 2 − 2s) = 1 expected
    let (a, b, c) = (at(250), at(500), at(1000));
    let rate = ((a - b) / (b - c)).abs().log2();
    assert!(rate > 0.8 && rate < 1.3, "rate {rate}");
}

#[test]
fn luxemburg_examples() {
    let m = unit(16);
    let g = NFunction::power(2.0).unwrap();
    assert_eq!(lg_norm(&GridFunction::zeros(m), &g).unwrap().norm, 0.0);
    let one = GridFunction::constant(m, 1.0).unwrap();
    let l = lg_norm(&one, &g).unwrap();
    assert!((l.norm - 0.5f64.sqrt()).abs() < 1e-14, "{}", l.norm);
    assert!(l.residual < 1e-10);
}

#[test]
fn luxemburg_homogeneity() {
    let m = unit(32);
    let mut rng = stream(11, &[], 0);
    for g in [NFunction::power(3.0).unwrap(), NFunction::power_log(3.0).unwrap()] {
        for _ in 0..10 {
            let u = fourier_bump(&m, &mut rng);
            let a = lg_norm(&u, &g).unwrap().norm;
            let b = lg_norm(&u.scaled(2.0), &g).unwrap().norm;
            assert!((b - 2.0 * a).abs() <= 1e-12 * b, "{a} {b}");
            let a = seminorm(&u, &g, 0.5, SgDomain::FullSpace).unwrap().norm;
            let b = seminorm(&u.scaled(2.0), &g, 0.5, SgDomain::FullSpace).unwrap().norm;
            assert!((b - 2.0 * a).abs() <= 1e-12 * b, "{a} {b}");
        }
    }
}

#[test]
fn luxemburg_rejects_increasing_modular() {
    let r = luxemburg_norm(|c| 1.0 / c, false, 1.0);
    assert!(matches!(r, Err(Error::Internal(_))));
}

#[test]
fn holder_equality_for_power_two() {
    let m = unit(16);
    let g = NFunction::power(2.0).unwrap();
    let gb = complementary(&g, DEFAULT_TABLE_POINTS).unwrap();
    let one = GridFunction::constant(m, 1.0).unwrap();
    let c = holder_pairing_check(&one, &one, &g, &gb).unwrap();
    assert!((c.lhs - 1.0).abs() < 1e-14 && (c.rhs - 1.0).abs() < 1e-9 && c.ok);
    let z = GridFunction::zeros(m);
    assert!(holder_pairing_check(&z, &one, &g, &gb).unwrap().ok);
}

#[test]
fn poincare_running_max() {
    let g = NFunction::power(2.0).unwrap();
    let m = unit(32);
    let run = poincare_constant_estimate(&g, 0.5, &m, 300, 5).unwrap();
    assert!(run.windows(2).all(|w| w[1] >= w[0]));
    assert!(run[0] > 0.0 && run[299].is_finite());
}

#[test]
fn text_round_trip() {
    let m = Mesh::new(-1.0, 1.0, 12).unwrap();
    let u = GridFunction::from_fn(m, |x| x.sin() / 3.0).unwrap().with_label("u");
    let back = GridFunction::from_text(m, &u.to_text()).unwrap();
    assert_eq!(back.values(), u.values());
    assert!(GridFunction::from_text(unit(12), &u.to_text()).is_err());
}
