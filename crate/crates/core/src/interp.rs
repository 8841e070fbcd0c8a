//! Monotone cubic Hermite tables in log–log coordinates.
//!
//! Tabulated N-functions and the derived functions (complementary, inverse,
//! Sobolev conjugate) are stored as `(ln t, ln v)` pairs. Power laws are
//! straight lines in these coordinates, so the interpolant is exact for the
//! pure power family and very accurate for sums of powers. Outside the table
//! the end slopes are continued, i.e. the function is extended as a power law.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LogLogTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ms: Vec<f64>,
}

impl LogLogTable {
    /// Build from samples with known log–log slopes `d ln v / d ln t`.
    ///
    /// Samples are sorted and de-duplicated by `t`; slopes are passed through
    /// the Fritsch–Carlson limiter so the interpolant stays monotone.
    pub fn with_slopes(ts: &[f64], vs: &[f64], slopes: &[f64]) -> Result<Self> {
        if ts.len() != vs.len() || ts.len() != slopes.len() {
            return Err(Error::Internal("table length mismatch".into()));
        }
        let mut pts: Vec<(f64, f64, f64)> = ts
            .iter()
            .zip(vs)
            .zip(slopes)
            .map(|((&t, &v), &m)| (t, v, m))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        if pts.len() < 2 {
            return Err(Error::Internal("table needs at least two samples".into()));
        }
        let mut xs = Vec::with_capacity(pts.len());
        let mut ys = Vec::with_capacity(pts.len());
        let mut ms = Vec::with_capacity(pts.len());
        for (t, v, m) in pts {
            if !(t > 0.0 && v > 0.0 && t.is_finite() && v.is_finite() && m.is_finite()) {
                return Err(Error::Internal(format!("bad table sample t={t}, v={v}, slope={m}")));
            }
            xs.push(t.ln());
            ys.push(v.ln());
            ms.push(m);
        }
        let mut table = LogLogTable { xs, ys, ms };
        table.limit_slopes();
        Ok(table)
    }

    /// Piecewise cubic Hermite interpolation with Fritsch–Butland slopes.
    pub fn pchip(ts: &[f64], vs: &[f64]) -> Result<Self> {
        let n = ts.len();
        if n < 2 || vs.len() != n {
            return Err(Error::Internal("pchip needs at least two samples".into()));
        }
        let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
        let ys: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut ms = vec![0.0; n];
        if n == 2 {
            ms[0] = d[0];
            ms[1] = d[0];
        } else {
            for k in 1..n - 1 {
                if d[k - 1] * d[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    ms[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
                }
            }
            ms[0] = end_slope(h[0], h[1], d[0], d[1]);
            ms[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        }
        let mut table = LogLogTable { xs, ys, ms };
        table.limit_slopes();
        Ok(table)
    }

    fn limit_slopes(&mut self) {
        for k in 0..self.xs.len() - 1 {
            let delta = (self.ys[k + 1] - self.ys[k]) / (self.xs[k + 1] - self.xs[k]);
            if delta == 0.0 {
                self.ms[k] = 0.0;
                self.ms[k + 1] = 0.0;
                continue;
            }
            let a = self.ms[k] / delta;
            let b = self.ms[k + 1] / delta;
            if a < 0.0 {
                self.ms[k] = 0.0;
            }
            if b < 0.0 {
                self.ms[k + 1] = 0.0;
            }
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                self.ms[k] = tau * a * delta;
                self.ms[k + 1] = tau * b * delta;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Smallest and largest tabulated abscissa.
    pub fn t_range(&self) -> (f64, f64) {
        (self.xs[0].exp(), self.xs[self.xs.len() - 1].exp())
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().zip(&self.ys).map(|(x, y)| (x.exp(), y.exp()))
    }

    /// Log–log slope at the nodes.
    pub fn slopes(&self) -> &[f64] {
        &self.ms
    }

    /// `(y, dy/dx, d²y/dx²)` at log-abscissa `x`.
    fn eval_log(&self, x: f64) -> (f64, f64, f64) {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return (self.ys[0] + self.ms[0] * (x - self.xs[0]), self.ms[0], 0.0);
        }
        if x >= self.xs[n - 1] {
            return (self.ys[n - 1] + self.ms[n - 1] * (x - self.xs[n - 1]), self.ms[n - 1], 0.0);
        }
        let k = self.xs.partition_point(|&xi| xi <= x) - 1;
        let h = self.xs[k + 1] - self.xs[k];
        let s = (x - self.xs[k]) / h;
        let (y0, y1, m0, m1) = (self.ys[k], self.ys[k + 1], self.ms[k] * h, self.ms[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let y = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let dy = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h;
        let d2y = ((12.0 * s - 6.0) * y0 + (6.0 * s - 4.0) * m0 + (-12.0 * s + 6.0) * y1 + (6.0 * s - 2.0) * m1)
            / (h * h);
        (y, dy, d2y)
    }

    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.eval_log(t.ln()).0.exp()
    }

    /// First derivative in the original coordinates.
    pub fn deriv(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (y, dy, _) = self.eval_log(t.ln());
        y.exp() * dy / t
    }

    /// Second derivative in the original coordinates.
    pub fn second_deriv(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (y, dy, d2y) = self.eval_log(t.ln());
        y.exp() * (dy * dy + d2y - dy) / (t * t)
    }

    /// Local log–log slope `t v'(t) / v(t)`.
    pub fn log_slope(&self, t: f64) -> f64 {
        self.eval_log(t.max(f64::MIN_POSITIVE).ln()).1
    }

    /// The table with abscissa and ordinate exchanged (inverse function).
    pub fn inverted(&self) -> Result<Self> {
        if self.ys.windows(2).any(|w| w[1] <= w[0]) || self.ms.iter().any(|&m| m <= 0.0) {
            return Err(Error::Internal("table is not strictly increasing".into()));
        }
        Ok(LogLogTable {
            xs: self.ys.clone(),
            ys: self.xs.clone(),
            ms: self.ms.iter().map(|m| 1.0 / m).collect(),
        })
    }

    /// The table of `t ↦ v(t^e)`; exact in log–log coordinates.
    pub fn compose_power(&self, exponent: f64) -> Self {
        LogLogTable {
            xs: self.xs.iter().map(|x| x / exponent).collect(),
            ys: self.ys.clone(),
            ms: self.ms.iter().map(|m| m * exponent).collect(),
        }
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// `n` log-spaced points covering `[lo, hi]` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
