//! Young's orthogonal representation of S_N.
//!
//! Explicit real orthogonal matrices for every irrep, in the standard
//! tableau basis fixed by [`standard_tableaux`]. Used to build isotypic
//! matrix units for the Schur-Weyl block extraction and as an independent
//! oracle for the Murnaghan-Nakayama characters.

use crate::scalar::{from_f64, Scalar};
use crate::symgroup::partition::Partition;
use crate::symgroup::permutation::Permutation;
use crate::symgroup::tableau::{standard_tableaux, StandardTableau};
use nalgebra::DMatrix;

/// The orthogonal irrep of shape λ, with matrices materialized on demand.
pub struct OrthogonalIrrep {
    shape: Partition,
    tableaux: Vec<StandardTableau>,
}

impl OrthogonalIrrep {
    pub fn new(shape: &Partition) -> Self {
        OrthogonalIrrep {
            shape: shape.clone(),
            tableaux: standard_tableaux(shape),
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Irrep dimension d_λ (= number of standard tableaux).
    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    /// Matrix of the adjacent transposition (k, k+1), 1-based k.
    ///
    /// In the tableau basis the generator acts within pairs: with axial
    /// distance d from k to k+1 the diagonal entry is 1/d, and when the
    /// swapped filling is again standard the pair mixes with off-diagonal
    /// sqrt(1 - 1/d²).
    fn adjacent<T: Scalar>(&self, k: usize) -> DMatrix<T> {
        let d = self.dim();
        let mut m = DMatrix::<T>::zeros(d, d);
        let index: std::collections::HashMap<&StandardTableau, usize> =
            self.tableaux.iter().zip(0..).collect();
        for (t_idx, t) in self.tableaux.iter().enumerate() {
            let (r1, c1) = t.position(k);
            let (r2, c2) = t.position(k + 1);
            let axial = (c2 as i64 - r2 as i64) - (c1 as i64 - r1 as i64);
            let rho = T::one() / from_f64::<T>(axial as f64);
            m[(t_idx, t_idx)] = rho;
            if let Some(swapped) = t.swapped(k, k + 1) {
                let s_idx = index[&swapped];
                m[(s_idx, t_idx)] = (T::one() - rho * rho).sqrt();
            }
        }
        m
    }

    /// Matrix of an arbitrary permutation, via its factorization into
    /// adjacent transpositions.
    pub fn matrix<T: Scalar>(&self, p: &Permutation) -> DMatrix<T> {
        assert_eq!(p.n(), self.shape.n_boxes(), "degree mismatch");
        let mut m = DMatrix::<T>::identity(self.dim(), self.dim());
        for j in p.adjacent_factors() {
            m *= self.adjacent::<T>(j);
        }
        m
    }
}
