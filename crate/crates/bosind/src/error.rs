//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, certification and solver routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A requested object exceeds the enumeration or memory guards.
    #[error("size guard exceeded: {0}")]
    Size(String),

    /// Incompatible shapes or mismatched particle numbers.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Invalid input values (mode indices, occupations, tableaux, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operator failed the permutation-invariance certification.
    #[error("not permutation invariant: {0}")]
    Invariance(String),

    /// An operator failed positivity or normalization certification.
    #[error("not a density operator: {0}")]
    NotDensity(String),

    /// The state has (numerically) no support on the symmetric subspace.
    #[error("no symmetric support: p_N = {p_n} below cutoff")]
    NoSymmetricSupport { p_n: f64 },

    /// Eigenvalue clustering could not separate eigenspaces cleanly.
    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    /// The linear program has an empty feasible set.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An eigenspace rank is not an integer multiple of N!.
    #[error("not a multiple of the regular representation: {0}")]
    NotRegular(String),

    /// Certification precondition of the canonical form is violated.
    #[error("state is not perfectly distinguishable: {0}")]
    NotDistinguishable(String),

    /// A measurement design does not determine the state.
    #[error("underdetermined reconstruction: rank {rank} < {needed}; null directions: {null_directions:?}")]
    Underdetermined {
        rank: usize,
        needed: usize,
        null_directions: Vec<String>,
    },

    /// Random observable basis failed the conditioning certificate.
    #[error("ill-conditioned observable basis: {0}")]
    Conditioning(String),
}

pub type Result<T> = std::result::Result<T, Error>;
