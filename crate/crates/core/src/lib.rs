//! Generator and analyzer of nonreflecting (absorbing) boundary conditions
//! for scalar wave equations.
//!
//! The workflow: pick a set of local outgoing-wave basis functions
//! ([`basis`]), pick a set of linear functionals ([`dof`]), assemble the
//! matrix of functionals applied to basis functions and read the scheme
//! coefficients off its nullspace ([`machine`]). Scheme quality is measured
//! by the reflection coefficient R(θ) ([`reflection`]), with closed-form
//! Engquist-Majda and Bayliss-Turkel operators as baselines ([`classical`]).
//! A 2D Helmholtz finite-difference demo ([`solver`]) installs generated
//! schemes as boundary rows.
//!
//! With the `parallel` feature (default), angle sweeps and matrix assembly
//! use rayon; disabling it falls back to sequential loops. The `*_seq`
//! entry points are always sequential so the two paths can be benchmarked
//! against each other.

pub mod basis;
pub mod classical;
pub mod dof;
pub mod error;
pub mod machine;
mod par;
pub mod quad;
pub mod reflection;
pub mod solver;
pub mod wave;

pub(crate) mod serde_util;

pub use basis::BasisSet;
pub use dof::{DofSpec, FunctionRef, QuadratureRule};
pub use error::{Error, Result};
pub use machine::{Scheme, TrefftzMatrix};
pub use reflection::{ReflectionSample, SweepConfig};
pub use wave::{Axis, Point, PolyExpFunction, RadialFunction, WaveContext};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
