//! Numerical toolkit for fractional Orlicz–Sobolev analysis in one space
//! dimension.
//!
//! The crate is organised around four layers:
//!
//! * [`nfunction`]: N-functions `G`, their derivatives, growth indices and the
//!   derived functions (complementary, inverse, Sobolev conjugate, power
//!   compositions).
//! * [`grid`]: cell-centred meshes on an interval, zero-extended grid
//!   functions, modulars, Luxemburg norms and the Gagliardo-type double sums.
//! * [`lab`]: executable gap functions for the functional inequalities of the
//!   theory, with seeded randomized sweeps and witness reporting.
//! * [`solver`]: the regularized energy of the singular problem, projected
//!   gradient minimization over the obstacle set, epsilon continuation and the
//!   comparison / uniqueness / symmetry experiments.

// `!(x > 0.0)` style guards also reject NaN, which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod interp;
pub mod lab;
pub mod nfunction;
pub mod quadrature;
pub mod reduce;
pub mod roots;
pub mod sampling;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{GridFunction, Mesh};
pub use nfunction::{DerivedNFunction, Family, NFunction, YoungFunction};
pub use solver::{ProblemSpec, SolveResult, SolverOptions};
