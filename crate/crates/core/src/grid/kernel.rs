//! Precomputed weights of the discrete Gagliardo sums.

use super::Mesh;
use crate::error::{Error, Result};
use crate::nfunction::NFunction;
use crate::reduce::{map_rows, sum_rows};

/// Offset weights `d_m^{-s}`, `d_m^{-1}` for `d_m = m h` and per-node
/// boundary weights `δ^{-s}` for the exterior tails.
#[derive(Debug, Clone)]
pub struct PairKernel {
    mesh: Mesh,
    s: f64,
    ds: Vec<f64>,
    dinv: Vec<f64>,
    tail_l: Vec<f64>,
    tail_r: Vec<f64>,
    r_pow: f64,
}

#[inline]
fn signum0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl PairKernel {
    pub fn new(mesh: &Mesh, s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidParameter(format!("order s must lie in (0,1), got {s}")));
        }
        let n = mesh.n();
        let h = mesh.h();
        let mut ds = vec![0.0; n];
        let mut dinv = vec![0.0; n];
        for m in 1..n {
            let d = m as f64 * h;
            ds[m] = d.powf(-s);
            dinv[m] = 1.0 / d;
        }
        let (tail_l, tail_r) = (0..n)
            .map(|i| {
                let (l, r) = mesh.boundary_distances(i);
                (l.powf(-s), r.powf(-s))
            })
            .unzip();
        Ok(PairKernel {
            mesh: *mesh,
            s,
            ds,
            dinv,
            tail_l,
            tail_r,
            r_pow: mesh.tail_radius().powf(-s),
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `h² Σ_{i≠j} G(|u_i − u_j| / d^s) / d`.
    pub fn interior_modular(&self, g: &NFunction, u: &[f64]) -> f64 {
        let n = u.len();
        let h = self.mesh.h();
        let total = sum_rows(n, |i| {
            let ui = u[i];
            let mut acc = 0.0;
            for (k, &uj) in u[i + 1..].iter().enumerate() {
                let m = k + 1;
                acc += g.value((ui - uj).abs() * self.ds[m]) * self.dinv[m];
            }
            acc
        });
        2.0 * h * h * total
    }

    /// `T_i(c) = ∫ G(|c| / r^s) dr / r` over both exterior rays, from the
    /// boundary distance to the tail radius.
    #[inline]
    pub fn tail(&self, g: &NFunction, i: usize, c: f64) -> f64 {
        let c = c.abs();
        if c == 0.0 {
            return 0.0;
        }
        let far = g.tail_primitive(c * self.r_pow);
        (g.tail_primitive(c * self.tail_l[i]) + g.tail_primitive(c * self.tail_r[i]) - 2.0 * far) / self.s
    }

    /// `d T_i / d c`.
    #[inline]
    pub fn tail_deriv(&self, g: &NFunction, i: usize, c: f64) -> f64 {
        let a = c.abs();
        if a == 0.0 {
            return 0.0;
        }
        let far = g.value(a * self.r_pow);
        signum0(c) * (g.value(a * self.tail_l[i]) + g.value(a * self.tail_r[i]) - 2.0 * far) / (self.s * a)
    }

    /// `2h Σ_i T_i(u_i)`.
    pub fn exterior_modular(&self, g: &NFunction, u: &[f64]) -> f64 {
        let parts: Vec<f64> = (0..u.len()).map(|i| self.tail(g, i, u[i])).collect();
        2.0 * self.mesh.h() * crate::reduce::pairwise_sum(&parts)
    }

    /// Gradient of the full-space modular with respect to the nodal values.
    pub fn gradient(&self, g: &NFunction, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        let h = self.mesh.h();
        map_rows(n, |i| {
            let ui = u[i];
            let mut acc = 0.0;
            for (j, &uj) in u.iter().enumerate() {
                if j == i {
                    continue;
                }
                let m = i.abs_diff(j);
                let diff = ui - uj;
                acc += g.deriv(diff.abs() * self.ds[m]) * signum0(diff) * self.ds[m] * self.dinv[m];
            }
            2.0 * h * h * acc + 2.0 * h * self.tail_deriv(g, i, ui)
        })
    }

    /// `⟨∇Φ(u), φ⟩` with the pair sum taken symmetrically over `i < j`.
    pub fn pairing(&self, g: &NFunction, u: &[f64], phi: &[f64]) -> f64 {
        let n = u.len();
        let h = self.mesh.h();
        let pairs = sum_rows(n, |i| {
            let mut acc = 0.0;
            for j in i + 1..n {
                let m = j - i;
                let diff = u[i] - u[j];
                acc += g.deriv(diff.abs() * self.ds[m]) * signum0(diff) * (phi[i] - phi[j]) * self.ds[m] * self.dinv[m];
            }
            acc
        });
        let tails: Vec<f64> = (0..n).map(|i| self.tail_deriv(g, i, u[i]) * phi[i]).collect();
        2.0 * h * h * pairs + 2.0 * h * crate::reduce::pairwise_sum(&tails)
    }
}
