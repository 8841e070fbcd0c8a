//! `G` given by samples, interpolated in log–log coordinates.

use crate::error::{Error, Result};
use crate::interp::LogLogTable;
use crate::quadrature::integrate;

#[derive(Debug, Clone)]
pub struct TabulatedG {
    table: LogLogTable,
    /// `Λ` at the table nodes.
    lambda: Vec<f64>,
    ts: Vec<f64>,
}

impl TabulatedG {
    /// Samples with `t = 0` are dropped (the value there is forced to 0).
    pub fn new(ts: &[f64], gs: &[f64]) -> Result<Self> {
        if ts.len() != gs.len() {
            return Err(Error::InvalidNFunction("column lengths differ".into()));
        }
        let mut pts = Vec::with_capacity(ts.len());
        for (&t, &g) in ts.iter().zip(gs) {
            if !t.is_finite() || !g.is_finite() || t < 0.0 {
                return Err(Error::InvalidNFunction(format!("bad sample ({t}, {g})")));
            }
            if t == 0.0 {
                if g != 0.0 {
                    return Err(Error::InvalidNFunction("G(0) must be 0".into()));
                }
                continue;
            }
            if g <= 0.0 {
                return Err(Error::InvalidNFunction(format!("G({t}) = {g} must be positive")));
            }
            pts.push((t, g));
        }
        if pts.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidNFunction("t column must be strictly increasing".into()));
        }
        if pts.len() < 4 {
            return Err(Error::InvalidNFunction("table needs at least 4 positive samples".into()));
        }
        let ts: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let vs: Vec<f64> = pts.iter().map(|p| p.1).collect();
        for w in 0..ts.len() - 2 {
            let s0 = (vs[w + 1] - vs[w]) / (ts[w + 1] - ts[w]);
            let s1 = (vs[w + 2] - vs[w + 1]) / (ts[w + 2] - ts[w + 1]);
            if s1 < s0 * (1.0 - 1e-10) || s0 <= 0.0 {
                return Err(Error::InvalidNFunction(format!(
                    "table is not increasing and convex near t = {}",
                    ts[w + 1]
                )));
            }
        }
        let table = LogLogTable::pchip(&ts, &vs).map_err(|e| Error::InvalidNFunction(e.to_string()))?;
        let m0 = table.slopes()[0];
        if m0 <= 1.0 {
            return Err(Error::InvalidNFunction(format!(
                "G(t)/t does not vanish at 0 (log-slope {m0} at the first sample)"
            )));
        }
        let mut lambda = Vec::with_capacity(ts.len());
        lambda.push(vs[0] / m0);
        for k in 1..ts.len() {
            let (a, b) = (ts[k - 1].ln(), ts[k].ln());
            let piece = integrate(|x| table.value(x.exp()), a, b, 0.0, 1e-13, 64).value;
            lambda.push(lambda[k - 1] + piece);
        }
        Ok(TabulatedG { table, lambda, ts })
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.table.t_range()
    }

    pub fn table(&self) -> &LogLogTable {
        &self.table
    }

    pub fn value(&self, t: f64) -> f64 {
        self.table.value(t)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.table.deriv(t)
    }

    pub fn second_deriv(&self, t: f64) -> f64 {
        self.table.second_deriv(t)
    }

    pub fn tail_primitive(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let n = self.ts.len();
        if t <= self.ts[0] {
            return self.table.value(t) / self.table.slopes()[0];
        }
        if t >= self.ts[n - 1] {
            let m = self.table.slopes()[n - 1];
            return self.lambda[n - 1] + (self.table.value(t) - self.table.value(self.ts[n - 1])) / m;
        }
        let k = self.ts.partition_point(|&x| x <= t) - 1;
        let piece = integrate(|x| self.table.value(x.exp()), self.ts[k].ln(), t.ln(), 0.0, 1e-13, 64).value;
        self.lambda[k] + piece
    }
}
