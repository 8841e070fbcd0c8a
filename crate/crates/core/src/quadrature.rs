//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

// Kronrod abscissae and weights (QUADPACK qk15), positive half.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

/// Integrate `f` over `[a, b]` until the summed error estimate is below
/// `max(abs_tol, rel_tol·|I|)` or `max_intervals` is reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        };
    }
    let (v, e) = gk15(&f, a, b);
    let mut segs = vec![Segment {
        a,
        b,
        value: v,
        error: e,
    }];
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        let tol = abs_tol.max(rel_tol * total.abs());
        if err <= tol || segs.len() >= max_intervals {
            return QuadResult {
                value: total,
                error: err,
                intervals: segs.len(),
            };
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s.error > acc.1 { (i, s.error) } else { acc });
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Interval cannot be split further in floating point.
            segs.push(Segment { error: 0.0, ..s });
            continue;
        }
        let (v1, e1) = gk15(&f, s.a, mid);
        let (v2, e2) = gk15(&f, mid, s.b);
        segs.push(Segment {
            a: s.a,
            b: mid,
            value: v1,
            error: e1,
        });
        segs.push(Segment {
            a: mid,
            b: s.b,
            value: v2,
            error: e2,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x + 1.0, 0.0, 2.0, 1e-14, 1e-14, 50);
        assert!((r.value - 10.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, 1e-10, 1e-10, 500);
        assert!((r.value - 2.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn oscillatory() {
        let r = integrate(|x: f64| (10.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12, 1e-12, 200);
        assert!(r.value.abs() < 1e-11);
    }
}
