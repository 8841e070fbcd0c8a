//! Cell-centred meshes on `Ω = (a, b)` and zero-extended grid functions.

mod kernel;
mod norms;

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::nfunction::parse_two_columns;

pub use kernel::PairKernel;
pub use norms::{
    holder_pairing_check, lg_norm, luxemburg_norm, modular_g, modular_sg, poincare_constant_estimate,
    seminorm, tail_remainder_bound, HolderCheck, Luxemburg, SgDomain,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    a: f64,
    b: f64,
    n: usize,
    h: f64,
    tail_radius: f64,
}

impl Mesh {
    /// Mesh with the default exterior radius `R = 1e6·(b − a)`.
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::with_tail_radius(a, b, n, 1e6 * (b - a))
    }

    pub fn with_tail_radius(a: f64, b: f64, n: usize, tail_radius: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidParameter(format!("need a < b, got ({a}, {b})")));
        }
        if n < 8 {
            return Err(Error::InvalidParameter(format!("need n >= 8 cells, got {n}")));
        }
        if !(tail_radius >= 10.0 * (b - a)) || !tail_radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tail radius {tail_radius} must be at least 10·(b−a) = {}",
                10.0 * (b - a)
            )));
        }
        Ok(Mesh {
            a,
            b,
            n,
            h: (b - a) / n as f64,
            tail_radius,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn tail_radius(&self) -> f64 {
        self.tail_radius
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// Cell centre `x_i = a + (i + ½) h`.
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.a + (i as f64 + 0.5) * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Distances from `x_i` to the left and right ends of `Ω`.
    #[inline]
    pub fn boundary_distances(&self, i: usize) -> (f64, f64) {
        ((i as f64 + 0.5) * self.h, (self.n as f64 - i as f64 - 0.5) * self.h)
    }

    /// Same interval with `n` cells and the same tail radius.
    pub fn refined(&self, n: usize) -> Result<Self> {
        Self::with_tail_radius(self.a, self.b, n, self.tail_radius)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    mesh: Mesh,
    values: Vec<f64>,
    label: String,
}

impl GridFunction {
    pub fn new(mesh: Mesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n {
            return Err(Error::InvalidParameter(format!(
                "{} values for a mesh of {} cells",
                values.len(),
                mesh.n
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("value {} at node {i} is not finite", values[i])));
        }
        Ok(GridFunction {
            mesh,
            values,
            label: String::new(),
        })
    }

    pub fn from_fn(mesh: Mesh, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(mesh, mesh.nodes().into_iter().map(f).collect())
    }

    pub fn zeros(mesh: Mesh) -> Self {
        GridFunction {
            mesh,
            values: vec![0.0; mesh.n],
            label: String::new(),
        }
    }

    pub fn constant(mesh: Mesh, c: f64) -> Result<Self> {
        Self::new(mesh, vec![c; mesh.n])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at node `i`.
    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            mesh: self.mesh,
            values: self.values.iter().map(|&v| f(v)).collect(),
            label: self.label.clone(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `u_{n−1−i}`: reflection about the midpoint of `Ω`.
    pub fn reflected(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        GridFunction {
            mesh: self.mesh,
            values,
            label: self.label.clone(),
        }
    }

    /// Two-column text: `x_i value_i`, full round-trip precision.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.label.is_empty() {
            let _ = writeln!(out, "# {}", self.label);
        }
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{:e} {:e}", self.mesh.node(i), v);
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Parse two-column text whose abscissae must be the nodes of `mesh`.
    pub fn from_text(mesh: Mesh, text: &str) -> Result<Self> {
        let (xs, vs) = parse_two_columns(text)?;
        if xs.len() != mesh.n {
            return Err(Error::InvalidParameter(format!(
                "grid file has {} rows, mesh has {} cells",
                xs.len(),
                mesh.n
            )));
        }
        for (i, &x) in xs.iter().enumerate() {
            if (x - mesh.node(i)).abs() > 1e-9 * mesh.h.max(1.0) {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("abscissa {x} does not match node x_{i} = {}", mesh.node(i)),
                });
            }
        }
        Self::new(mesh, vs)
    }

    pub fn read(mesh: Mesh, path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(mesh, &std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests;
