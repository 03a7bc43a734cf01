//! Dense operators on the N-particle external Hilbert space (C^M)^⊗N.
//!
//! The computational basis is the set of mode assignment vectors
//! |l_1, ..., l_N⟩ with l_i ∈ {1, ..., M}, ordered lexicographically
//! (first particle most significant). All matrices are materialized densely;
//! the dimension guard keeps M^N ≤ 4096.

use crate::error::{Error, Result};
use crate::scalar::{c_re, Scalar, C};
use nalgebra::{DMatrix, DVector};

/// Dimension guard for dense materialization.
pub const MAX_DIM: usize = 4096;

/// Default cutoff below which an eigenvalue counts as zero when computing
/// ranks of (near-)projectors.
pub const RANK_CUTOFF: f64 = 1e-9;

/// A pure state vector on a tensor space.
pub type StateVector<T> = DVector<C<T>>;

/// Checked dimension M^N with the materialization guard.
pub fn space_dim(modes: usize, particles: usize) -> Result<usize> {
    if modes < 1 || particles < 1 {
        return Err(Error::Size(format!(
            "need M >= 1 and N >= 1, got M = {modes}, N = {particles}"
        )));
    }
    let mut dim: usize = 1;
    for _ in 0..particles {
        dim = dim
            .checked_mul(modes)
            .filter(|&d| d <= MAX_DIM)
            .ok_or_else(|| {
                Error::Size(format!(
                    "M^N = {modes}^{particles} exceeds the dense guard {MAX_DIM}"
                ))
            })?;
    }
    Ok(dim)
}

/// A mode assignment vector: the computational basis label giving each
/// particle's mode, with 1-based entries in {1, ..., M}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeAssignment {
    entries: Vec<usize>,
    modes: usize,
}

impl ModeAssignment {
    pub fn new(entries: Vec<usize>, modes: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Validation("empty mode assignment".into()));
        }
        if let Some(&bad) = entries.iter().find(|&&l| l < 1 || l > modes) {
            return Err(Error::Validation(format!(
                "mode index {bad} outside 1..={modes} in {entries:?}"
            )));
        }
        Ok(ModeAssignment { entries, modes })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.entries.len()
    }

    /// Index of |l_1...l_N⟩ in the lexicographic basis.
    pub fn index(&self) -> usize {
        self.entries
            .iter()
            .fold(0, |acc, &l| acc * self.modes + (l - 1))
    }

    /// Inverse of [`ModeAssignment::index`].
    pub fn from_index(index: usize, modes: usize, particles: usize) -> Self {
        let mut entries = vec![0; particles];
        let mut rest = index;
        for i in (0..particles).rev() {
            entries[i] = rest % modes + 1;
            rest /= modes;
        }
        ModeAssignment { entries, modes }
    }
}

impl std::fmt::Display for ModeAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|")?;
        for l in &self.entries {
            write!(f, "{l}")?;
        }
        write!(f, "⟩")
    }
}

/// A square complex matrix on (C^M)^⊗N in the mode-assignment basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<T: Scalar> {
    modes: usize,
    particles: usize,
    mat: DMatrix<C<T>>,
}

impl<T: Scalar> DenseOperator<T> {
    pub fn zeros(modes: usize, particles: usize) -> Result<Self> {
        let dim = space_dim(modes, particles)?;
        Ok(DenseOperator {
            modes,
            particles,
            mat: DMatrix::zeros(dim, dim),
        })
    }

    pub fn identity(modes: usize, particles: usize) -> Result<Self> {
        let dim = space_dim(modes, particles)?;
        Ok(DenseOperator {
            modes,
            particles,
            mat: DMatrix::identity(dim, dim),
        })
    }

    /// Wraps a matrix, checking the dimension against M^N.
    pub fn from_matrix(modes: usize, particles: usize, mat: DMatrix<C<T>>) -> Result<Self> {
        let dim = space_dim(modes, particles)?;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, expected {dim}x{dim} for (M, N) = ({modes}, {particles})",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(DenseOperator {
            modes,
            particles,
            mat,
        })
    }

    /// Rank-one projector |v⟩⟨v| of a normalized vector.
    pub fn pure(modes: usize, particles: usize, v: &StateVector<T>) -> Result<Self> {
        let dim = space_dim(modes, particles)?;
        if v.len() != dim {
            return Err(Error::Shape(format!(
                "vector length {} does not match dimension {dim}",
                v.len()
            )));
        }
        Ok(DenseOperator {
            modes,
            particles,
            mat: v * v.adjoint(),
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C<T>> {
        &self.mat
    }

    pub fn matrix_mut(&mut self) -> &mut DMatrix<C<T>> {
        &mut self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C<T>> {
        self.mat
    }

    pub fn same_space(&self, other: &Self) -> bool {
        self.modes == other.modes && self.particles == other.particles
    }

    fn assert_space(&self, other: &Self) {
        assert!(
            self.same_space(other),
            "operators live on different spaces: ({}, {}) vs ({}, {})",
            self.modes,
            self.particles,
            other.modes,
            other.particles
        );
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator {
            modes: self.modes,
            particles: self.particles,
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> C<T> {
        self.mat.trace()
    }

    pub fn trace_re(&self) -> T {
        self.mat.trace().re
    }

    pub fn frobenius_norm(&self) -> T {
        self.mat.norm()
    }

    pub fn scale(&self, s: T) -> Self {
        self.scale_c(c_re(s))
    }

    pub fn scale_c(&self, s: C<T>) -> Self {
        DenseOperator {
            modes: self.modes,
            particles: self.particles,
            mat: self.mat.map(|x| x * s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_space(other);
        DenseOperator {
            modes: self.modes,
            particles: self.particles,
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_space(other);
        DenseOperator {
            modes: self.modes,
            particles: self.particles,
            mat: &self.mat - &other.mat,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_space(other);
        DenseOperator {
            modes: self.modes,
            particles: self.particles,
            mat: &self.mat * &other.mat,
        }
    }

    /// tr[self · other], as a complex number.
    pub fn trace_product(&self, other: &Self) -> C<T> {
        self.assert_space(other);
        let mut acc = C::new(T::zero(), T::zero());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.mat[(i, j)] * other.mat[(j, i)];
            }
        }
        acc
    }

    /// ‖self − other‖_F.
    pub fn distance(&self, other: &Self) -> T {
        self.assert_space(other);
        (&self.mat - &other.mat).norm()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        (&self.mat - self.mat.adjoint()).norm() < tol
    }

    /// P² = P = P† within tol.
    pub fn is_projector(&self, tol: T) -> bool {
        self.is_hermitian(tol) && (&self.mat * &self.mat - &self.mat).norm() < tol
    }

    /// ‖[self, other]‖_F.
    pub fn commutator_norm(&self, other: &Self) -> T {
        self.assert_space(other);
        (&self.mat * &other.mat - &other.mat * &self.mat).norm()
    }

    /// Eigendecomposition of a hermitian operator; eigenvalues sorted in
    /// decreasing order, columns of the returned matrix are the matching
    /// orthonormal eigenvectors.
    pub fn hermitian_eigen(&self) -> (Vec<T>, DMatrix<C<T>>) {
        let eig = crate::linalg::hermitian_eigen(&self.mat);
        (eig.values, eig.vectors)
    }

    /// Number of eigenvalues above the cutoff; for projectors this is the
    /// rank up to roundoff.
    pub fn rank(&self, cutoff: T) -> usize {
        let (vals, _) = self.hermitian_eigen();
        vals.iter().filter(|&&v| v > cutoff).count()
    }

    /// Hermitian square root via eigendecomposition. Eigenvalues below
    /// `-clip` are an error; eigenvalues in `(-clip, clip)` are treated as
    /// exact zeros — the square root amplifies kernel roundoff otherwise.
    pub fn sqrt_psd(&self, clip: T) -> Result<Self> {
        let (vals, vecs) = self.hermitian_eigen();
        if let Some(&bad) = vals.iter().find(|&&v| v < -clip) {
            return Err(Error::NotDensity(format!(
                "negative eigenvalue {bad:?} below clip threshold"
            )));
        }
        let dim = self.dim();
        let mut diag = DMatrix::zeros(dim, dim);
        for (i, &v) in vals.iter().enumerate() {
            let v = if v > clip { v } else { T::zero() };
            diag[(i, i)] = c_re(v.sqrt());
        }
        let mat = &vecs * diag * vecs.adjoint();
        Ok(DenseOperator {
            modes: self.modes,
            particles: self.particles,
            mat,
        })
    }

    /// Entrywise transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        DenseOperator {
            modes: self.modes,
            particles: self.particles,
            mat: self.mat.transpose(),
        }
    }

    /// Tensor product, concatenating particle registers of equal mode count.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.modes != other.modes {
            return Err(Error::Shape(format!(
                "kron requires equal mode counts, got {} and {}",
                self.modes, other.modes
            )));
        }
        let particles = self.particles + other.particles;
        space_dim(self.modes, particles)?;
        Ok(DenseOperator {
            modes: self.modes,
            particles,
            mat: self.mat.kronecker(&other.mat),
        })
    }

    /// Partial trace over the last `k` particles.
    pub fn partial_trace_last(&self, k: usize) -> Result<Self> {
        if k >= self.particles {
            return Err(Error::Shape(format!(
                "cannot trace out {k} of {} particles",
                self.particles
            )));
        }
        let keep = self.particles - k;
        let d1 = space_dim(self.modes, keep)?;
        let d2 = self.dim() / d1;
        let mut mat = DMatrix::zeros(d1, d1);
        for a in 0..d1 {
            for b in 0..d1 {
                let mut acc = C::new(T::zero(), T::zero());
                for c in 0..d2 {
                    acc += self.mat[(a * d2 + c, b * d2 + c)];
                }
                mat[(a, b)] = acc;
            }
        }
        Ok(DenseOperator {
            modes: self.modes,
            particles: keep,
            mat,
        })
    }
}

/// Reduced density matrix of a pure state on a bipartite space
/// (C^M)^⊗n1 ⊗ (C^M)^⊗n2, tracing out the second factor.
pub fn reduced_density<T: Scalar>(
    psi: &StateVector<T>,
    modes: usize,
    n_first: usize,
    n_second: usize,
) -> Result<DenseOperator<T>> {
    let d1 = space_dim(modes, n_first)?;
    let d2 = space_dim(modes, n_second)?;
    if psi.len() != d1 * d2 {
        return Err(Error::Shape(format!(
            "vector length {} does not match {d1}x{d2}",
            psi.len()
        )));
    }
    let mut mat = DMatrix::zeros(d1, d1);
    for a in 0..d1 {
        for b in 0..d1 {
            let mut acc = C::new(T::zero(), T::zero());
            for c in 0..d2 {
                acc += psi[a * d2 + c] * psi[b * d2 + c].conj();
            }
            mat[(a, b)] = acc;
        }
    }
    DenseOperator::from_matrix(modes, n_first, mat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment_roundtrip() {
        let m = 3;
        let n = 3;
        for idx in 0..27 {
            let a = ModeAssignment::from_index(idx, m, n);
            assert_eq!(a.index(), idx);
        }
        // lexicographic: |111⟩ = 0, |112⟩ = 1, |121⟩ = 3
        assert_eq!(ModeAssignment::new(vec![1, 1, 1], 3).unwrap().index(), 0);
        assert_eq!(ModeAssignment::new(vec![1, 1, 2], 3).unwrap().index(), 1);
        assert_eq!(ModeAssignment::new(vec![1, 2, 1], 3).unwrap().index(), 3);
    }

    #[test]
    fn assignment_validation() {
        assert!(ModeAssignment::new(vec![0, 1], 2).is_err());
        assert!(ModeAssignment::new(vec![3], 2).is_err());
        assert!(ModeAssignment::new(vec![], 2).is_err());
    }

    #[test]
    fn dimension_guard() {
        assert!(space_dim(2, 12).is_ok()); // 4096
        assert!(space_dim(2, 13).is_err());
        assert!(space_dim(0, 1).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        // tr_2[A ⊗ B] = tr[B] · A
        let a = DenseOperator::<f64>::from_matrix(
            2,
            1,
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    C::new(1.0, 0.0),
                    C::new(0.5, 0.2),
                    C::new(0.5, -0.2),
                    C::new(2.0, 0.0),
                ],
            ),
        )
        .unwrap();
        let b = DenseOperator::<f64>::from_matrix(
            2,
            1,
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    C::new(0.3, 0.0),
                    C::new(0.0, 0.1),
                    C::new(0.0, -0.1),
                    C::new(0.7, 0.0),
                ],
            ),
        )
        .unwrap();
        let ab = a.kron(&b).unwrap();
        let reduced = ab.partial_trace_last(1).unwrap();
        let expected = a.scale(1.0); // tr[B] = 1
        assert!(reduced.distance(&expected) < 1e-14);
    }

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C::new(1.0, 0.0),
                C::new(0.0, -0.5),
                C::new(0.0, 0.5),
                C::new(2.0, 0.0),
            ],
        );
        let op = DenseOperator::<f64>::from_matrix(2, 1, m.clone()).unwrap();
        let (vals, vecs) = op.hermitian_eigen();
        assert!(vals[0] >= vals[1]);
        let diag = DMatrix::from_fn(2, 2, |r, c| {
            if r == c {
                C::new(vals[r], 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        });
        let rec = &vecs * diag * vecs.adjoint();
        assert!((rec - m).norm() < 1e-12);
    }

    #[test]
    fn projector_detection() {
        let id = DenseOperator::<f64>::identity(2, 2).unwrap();
        assert!(id.is_projector(1e-12));
        assert_eq!(id.rank(1e-9), 4);
        let half = id.scale(0.5);
        assert!(!half.is_projector(1e-12));
    }
}
