//! Exact combinatorics of the symmetric group S_N: permutations, signs,
//! cycle types, integer partitions, irrep dimensions and characters, and
//! the transposition-mean eigenvalues t_λ.
//!
//! Everything here is exact (integer or rational); floating point enters
//! only through the orthogonal irrep matrices of [`yor`].

pub mod character;
pub mod partition;
pub mod permutation;
pub mod tableau;
pub mod yor;

pub use character::irrep_character;
pub use partition::{partitions, CycleType, Partition, Rational};
pub use permutation::{
    adjacent_transpositions, permutations, transpositions, Permutation, MAX_ENUM_N,
};
pub use tableau::{standard_tableaux, StandardTableau};
pub use yor::OrthogonalIrrep;
