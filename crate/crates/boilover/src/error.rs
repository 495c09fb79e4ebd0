//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A required input is absent (e.g. neither V_a nor the mass burning
    /// rate was supplied, or a predictor needs theta_B0).
    #[error("missing input: {0}")]
    MissingInput(String),

    /// Two redundant inputs were both supplied and disagree.
    #[error("conflicting inputs: {0}")]
    Conflict(String),

    /// A record or parameter violates a physical-validity constraint.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The requested solution is outside its regime of validity
    /// (e.g. the conduction estimate with N_DHS <= 1).
    #[error("outside regime of validity: {0}")]
    InvalidRegime(String),

    /// An evaluation point is outside the domain of the closed form.
    #[error("domain error: {0}")]
    Domain(String),

    /// Explicit time step violates the stability bound.
    #[error("explicit scheme unstable: {0}")]
    Instability(String),

    /// Implicit solver failed to reach its tolerance.
    #[error("implicit solver did not converge: {0}")]
    NonConvergence(String),

    /// A data file does not conform to its schema.
    #[error("schema error at line {line}: {message}")]
    Schema { line: usize, message: String },

    /// A column carries an undeclared or unsupported unit.
    #[error("unit error: {0}")]
    Unit(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
