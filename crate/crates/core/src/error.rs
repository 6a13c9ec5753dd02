//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A degree of freedom was applied to a function family it cannot act on.
    #[error("dof `{dof}` cannot act on {family} functions")]
    FamilyMismatch { dof: String, family: &'static str },

    /// The dof×basis matrix admits no meaningful scheme (fewer than two
    /// columns, or identically zero).
    #[error("no meaningful scheme: {0}")]
    DegenerateMatrix(String),

    #[error("pivot {index} is too small for normalization (|s[{index}]| = {magnitude:.3e})")]
    ZeroPivot { index: usize, magnitude: f64 },

    #[error("sweep grids do not match ({0})")]
    GridMismatch(String),

    #[error("unsupported operator order {0}")]
    UnsupportedOrder(u32),

    #[error("closed-form denominator vanished (|den| = {0:.3e})")]
    VanishingDenominator(f64),

    #[error("linear system for bc `{bc}` is singular or near-singular: {detail}")]
    SingularSystem { bc: String, detail: String },

    #[error("solve for bc `{bc}` missed target residual {target:.1e} (achieved {achieved:.3e})")]
    SolveResidual {
        bc: String,
        target: f64,
        achieved: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
