//! Numerical toolkit for the indistinguishability of identical bosons.
//!
//! The library works with external density matrices of N particles in M
//! modes, i.e. permutation-invariant states on (C^M)^⊗N, and provides:
//!
//! - exact symmetric-group combinatorics ([`symgroup`]): permutations,
//!   partitions, characters, transposition eigenvalues t_λ;
//! - the tensor representation of S_N and its derived operators
//!   ([`tensor_rep`]): symmetric/antisymmetric/isotypic projectors, Young
//!   symmetrizers, Schur-Weyl block decompositions;
//! - state constructors and certification ([`states`]), including
//!   symmetric purifications;
//! - indistinguishability measures ([`measures`]): p_k, the
//!   indistinguishable part, trace-distance bounds, tight p_2 → p_N bounds
//!   and the partition-indexed linear program behind them;
//! - perfect-distinguishability certification and the canonical form under
//!   permutation-invariant unitaries ([`distinguishability`]);
//! - interferometer simulation with a permanent-based second-quantization
//!   oracle ([`interferometer`]);
//! - tomographic reconstruction from interference statistics
//!   ([`tomography`]);
//! - file formats shared with the command-line tool ([`io`]).
//!
//! Dense linear algebra is generic over the real scalar type through
//! [`scalar::Scalar`]; the aliases below fix `f64`, which is what all
//! stated tolerances are calibrated for. Exact quantities (characters,
//! t_λ, the bound linear program) use integer/rational arithmetic.

pub mod error;
pub mod scalar;

pub mod symgroup;

pub mod linalg;
pub mod operator;
pub mod random;
pub mod tensor_rep;

pub mod states;

pub mod distinguishability;
pub mod interferometer;
pub mod io;
pub mod measures;
pub mod tomography;

pub use error::{Error, Result};
pub use scalar::{Scalar, C};

/// Dense operator over `f64` (the validated precision).
pub type Operator = operator::DenseOperator<f64>;
/// Certified invariant state over `f64`.
pub type State = states::InvariantState<f64>;
/// Complex number over `f64`.
pub type C64 = C<f64>;
/// Pure state vector over `f64`.
pub type Vector = operator::StateVector<f64>;

/// Single-precision variants; they run with the same code paths but the
/// crate's default tolerances assume `f64`.
pub type Operator32 = operator::DenseOperator<f32>;
pub type State32 = states::InvariantState<f32>;
pub type C32 = C<f32>;
