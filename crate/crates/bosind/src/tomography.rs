//! Tomography of invariant states from interference statistics.
//!
//! Interference experiments (U^⊗N followed by particle counting) are
//! tomographically complete for permutation-invariant states. The space of
//! invariant operators has dimension K(M, N) = C(N+M²-1, M²-1) and is
//! spanned by the symmetrized products J(n) of a hermitian single-particle
//! basis; expectation values of N-fold products A^⊗N expand in that basis
//! with monomial coefficients, so K randomly drawn observables generically
//! determine the state. Reconstruction here solves the linear system tying
//! the recorded occupation distributions to the J(n) coordinates and
//! projects the result back to a density operator.

use crate::error::{Error, Result};
use crate::interferometer::{measurement_operator, occupations, OutcomeDistribution};
use crate::operator::DenseOperator;
use crate::random::ginibre;
use crate::scalar::{c_re, from_f64, Scalar, C};
use crate::states::InvariantState;
use crate::symgroup::permutations;
use crate::tensor_rep::{conjugate_by_perm, tensor_power};
use nalgebra::{ComplexField, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Dimension of the space of operators on (C^M)^⊗N commuting with every
/// permutation: C(N + M² - 1, M² - 1).
pub fn invariant_dimension(modes: usize, particles: usize) -> usize {
    let m2 = modes * modes;
    // C(N + M² - 1, M² - 1)
    let mut r: u128 = 1;
    for i in 0..(m2 - 1) {
        r = r * (particles + m2 - 1 - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// A fixed hermitian basis of the single-particle operators: diagonal
/// units E_kk, then for k < l the pair E_kl + E_lk and i(E_kl - E_lk).
pub fn hermitian_basis<T: Scalar>(modes: usize) -> Vec<DMatrix<C<T>>> {
    let mut out = Vec::with_capacity(modes * modes);
    for k in 0..modes {
        let mut g = DMatrix::<C<T>>::zeros(modes, modes);
        g[(k, k)] = c_re(T::one());
        out.push(g);
    }
    for k in 0..modes {
        for l in (k + 1)..modes {
            let mut x = DMatrix::<C<T>>::zeros(modes, modes);
            x[(k, l)] = c_re(T::one());
            x[(l, k)] = c_re(T::one());
            out.push(x);
            let mut y = DMatrix::<C<T>>::zeros(modes, modes);
            y[(k, l)] = C::new(T::zero(), T::one());
            y[(l, k)] = C::new(T::zero(), -T::one());
            out.push(y);
        }
    }
    out
}

/// All multi-indices n = (n_1, ..., n_{M²}) with Σ n_j = N, in the fixed
/// enumeration order used for J(n) coordinates.
pub fn multi_indices(slots: usize, total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; slots];
    fill(total, 0, slots, &mut current, &mut out);
    out
}

fn fill(
    remaining: usize,
    slot: usize,
    slots: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if slot == slots - 1 {
        current[slot] = remaining;
        out.push(current.clone());
        current[slot] = 0;
        return;
    }
    for c in 0..=remaining {
        current[slot] = c;
        fill(remaining - c, slot + 1, slots, current, out);
        current[slot] = 0;
    }
}

/// The symmetrized product basis element
/// J(n) = (1/∏ n_j!) Σ_π D(π) (⊗_m G_m^⊗n_m) D(π)†.
/// With this normalization A^⊗N = Σ_n (∏ λ_p^{n_p}) J(n) for
/// A = Σ λ_j G_j.
pub fn j_operator<T: Scalar>(
    n_vec: &[usize],
    basis: &[DMatrix<C<T>>],
    modes: usize,
) -> Result<DenseOperator<T>> {
    let particles: usize = n_vec.iter().sum();
    if n_vec.len() != basis.len() {
        return Err(Error::Shape(
            "multi-index length must match the basis".into(),
        ));
    }
    let mut product: Option<DMatrix<C<T>>> = None;
    for (g, &count) in basis.iter().zip(n_vec) {
        for _ in 0..count {
            product = Some(match product {
                None => g.clone(),
                Some(acc) => acc.kronecker(g),
            });
        }
    }
    let product = product.ok_or_else(|| Error::Validation("empty multi-index".into()))?;
    let op = DenseOperator::from_matrix(modes, particles, product)?;
    let group = permutations(particles)?;
    let mut acc = DenseOperator::zeros(modes, particles)?;
    for p in &group {
        acc = acc.add(&conjugate_by_perm(&op, p));
    }
    let mut norm = 1.0f64;
    for &c in n_vec {
        for k in 2..=c {
            norm *= k as f64;
        }
    }
    Ok(acc.scale(from_f64::<T>(1.0 / norm)))
}

/// Conditioning certificate of an observable set: determinant magnitude
/// and condition number of the row-normalized coefficient matrix of
/// {A_i^⊗N} in the J(n) basis.
#[derive(Debug, Clone)]
pub struct BasisCertificate<T: Scalar> {
    pub det_magnitude: T,
    pub condition: T,
}

/// K(M, N) single-particle hermitian observables whose N-fold products
/// span the invariant operator space, with the conditioning certificate.
pub struct ObservableBasis<T: Scalar> {
    pub modes: usize,
    pub particles: usize,
    /// Coordinates of each observable in the hermitian basis.
    pub coefficients: Vec<Vec<T>>,
    pub certificate: BasisCertificate<T>,
}

impl<T: Scalar> ObservableBasis<T> {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// The i-th observable A_i = Σ_j λ_j G_j as a matrix.
    pub fn observable(&self, i: usize) -> DMatrix<C<T>> {
        let basis = hermitian_basis::<T>(self.modes);
        let mut a = DMatrix::<C<T>>::zeros(self.modes, self.modes);
        for (g, &l) in basis.iter().zip(&self.coefficients[i]) {
            a += g * c_re(l);
        }
        a
    }
}

const MAX_DET: f64 = 1e-12;
const MAX_CONDITION: f64 = 1e8;
const RESAMPLE_LIMIT: usize = 32;

/// Certifies a set of coefficient vectors: builds the monomial coefficient
/// matrix Λ\[i]\[n] = ∏_p λ_p^{n_p}, row-normalizes it, and requires
/// |det| > 1e-12 and condition number < 1e8.
pub fn certify_observables<T: Scalar>(
    coefficients: &[Vec<T>],
    modes: usize,
    particles: usize,
) -> Result<BasisCertificate<T>> {
    let k = invariant_dimension(modes, particles);
    if coefficients.len() != k {
        return Err(Error::Conditioning(format!(
            "need exactly K = {k} observables, got {}",
            coefficients.len()
        )));
    }
    let indices = multi_indices(modes * modes, particles);
    let mut lambda = DMatrix::<T>::zeros(k, k);
    for (i, coeff) in coefficients.iter().enumerate() {
        for (col, n_vec) in indices.iter().enumerate() {
            let mut prod = T::one();
            for (p, &n) in n_vec.iter().enumerate() {
                for _ in 0..n {
                    prod *= coeff[p];
                }
            }
            lambda[(i, col)] = prod;
        }
        let norm = lambda.row(i).norm();
        if norm <= T::zero() {
            return Err(Error::Conditioning(format!("observable {i} vanishes")));
        }
        for col in 0..k {
            lambda[(i, col)] /= norm;
        }
    }
    let det = lambda.clone().lu().determinant().abs();
    let svd = lambda.svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if det < from_f64::<T>(MAX_DET) || smin <= T::zero() {
        return Err(Error::Conditioning(format!(
            "coefficient matrix is singular: |det| = {:?}",
            det
        )));
    }
    let condition = smax / smin;
    if condition > from_f64::<T>(MAX_CONDITION) {
        return Err(Error::Conditioning(format!(
            "condition number {:?} exceeds the threshold",
            condition
        )));
    }
    Ok(BasisCertificate {
        det_magnitude: det,
        condition,
    })
}

/// Draws K(M, N) observables with independent standard-normal coefficients
/// and a valid certificate, resampling a bounded number of times.
pub fn random_observable_basis<T: Scalar, R: Rng>(
    modes: usize,
    particles: usize,
    rng: &mut R,
) -> Result<ObservableBasis<T>> {
    let k = invariant_dimension(modes, particles);
    let m2 = modes * modes;
    let mut last_err = None;
    for _ in 0..RESAMPLE_LIMIT {
        let coefficients: Vec<Vec<T>> = (0..k)
            .map(|_| {
                (0..m2)
                    .map(|_| from_f64::<T>(rng.sample::<f64, _>(StandardNormal)))
                    .collect()
            })
            .collect();
        match certify_observables(&coefficients, modes, particles) {
            Ok(certificate) => {
                return Ok(ObservableBasis {
                    modes,
                    particles,
                    coefficients,
                    certificate,
                })
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Conditioning("resampling exhausted".into())))
}

/// One tomography setting: the interferometer applied before counting and
/// the recorded occupation distribution.
pub struct MeasurementRecord<T: Scalar> {
    pub unitary: DMatrix<C<T>>,
    pub distribution: OutcomeDistribution<T>,
}

/// The interferometer settings of an observable basis: for each A_i the
/// inverse of its eigenbasis, so that counting after the evolution
/// measures A_i^⊗N (and everything else diagonal in that basis).
pub fn design_unitaries<T: Scalar>(basis: &ObservableBasis<T>) -> Vec<DMatrix<C<T>>> {
    (0..basis.len())
        .map(|i| {
            let a = basis.observable(i);
            let eig = crate::linalg::hermitian_eigen(&a);
            eig.vectors.adjoint()
        })
        .collect()
}

/// Simulates the records of a full tomography run on a known state.
pub fn simulate_records<T: Scalar>(
    rho: &InvariantState<T>,
    settings: &[DMatrix<C<T>>],
) -> Result<Vec<MeasurementRecord<T>>> {
    settings
        .iter()
        .map(|u| {
            Ok(MeasurementRecord {
                unitary: u.clone(),
                distribution: crate::interferometer::outcome_distribution(rho, u)?,
            })
        })
        .collect()
}

/// Diagnostics of a reconstruction.
#[derive(Debug, Clone)]
pub struct ReconstructionReport<T: Scalar> {
    /// Least-squares residual ‖Ax - b‖ of the linear inversion.
    pub residual: T,
    /// Rank of the design matrix (must reach K).
    pub rank: usize,
    /// Invariant-space dimension K(M, N).
    pub dimension: usize,
    /// Number of settings used.
    pub settings: usize,
    /// Probability mass removed by the positivity projection.
    pub clipped_mass: T,
}

/// Reconstructs an invariant state from measurement records by linear
/// inversion in the J(n) coordinates followed by a positivity projection
/// (negative eigenvalues clipped, trace renormalized).
///
/// Each record contributes one equation per occupation:
/// tr[E(m) U^⊗N J(n) (U†)^⊗N] x_n = prob(m). Rank deficiency reports the
/// undetermined J(n) directions.
pub fn reconstruct_state<T: Scalar>(
    records: &[MeasurementRecord<T>],
    modes: usize,
    particles: usize,
) -> Result<(InvariantState<T>, ReconstructionReport<T>)> {
    if records.is_empty() {
        return Err(Error::Validation("no measurement records".into()));
    }
    let k = invariant_dimension(modes, particles);
    let indices = multi_indices(modes * modes, particles);
    let basis = hermitian_basis::<T>(modes);
    let js: Vec<DenseOperator<T>> = indices
        .iter()
        .map(|n| j_operator(n, &basis, modes))
        .collect::<Result<_>>()?;
    let occs = occupations(modes, particles);
    let detectors: Vec<DenseOperator<T>> = occs
        .iter()
        .map(|m| measurement_operator(m, particles))
        .collect::<Result<_>>()?;

    let rows = records.len() * occs.len();
    let mut design = DMatrix::<T>::zeros(rows, k);
    let mut rhs = DVector::<T>::zeros(rows);
    for (i, record) in records.iter().enumerate() {
        crate::interferometer::validate_unitary(&record.unitary, from_f64::<T>(1e-9))?;
        let un = tensor_power(&record.unitary, particles)?;
        for (col, j) in js.iter().enumerate() {
            let evolved = un.mul(j).mul(&un.adjoint());
            for (r, e) in detectors.iter().enumerate() {
                design[(i * occs.len() + r, col)] = e.trace_product(&evolved).re;
            }
        }
        for (r, occ) in occs.iter().enumerate() {
            rhs[i * occs.len() + r] = record.distribution.probability(occ);
        }
    }

    // rank analysis on the K x K Gram matrix: exposes the whole null space
    // even when the design has fewer rows than K
    let gram = design.transpose() * &design;
    let gram_c = gram.map(|x| C::new(x, T::zero()));
    let eig = crate::linalg::hermitian_eigen(&gram_c);
    let gmax = eig.values[0].max(T::zero());
    let gram_cutoff = gmax * from_f64::<T>(1e-20);
    let rank = eig.values.iter().filter(|&&v| v > gram_cutoff).count();
    if rank < k {
        let mut null_directions = Vec::new();
        for (i, &v) in eig.values.iter().enumerate() {
            if v <= gram_cutoff {
                let col = eig.vectors.column(i);
                let mut best = 0usize;
                for c in 0..k {
                    if col[c].modulus() > col[best].modulus() {
                        best = c;
                    }
                }
                null_directions.push(format!("J{:?}", indices[best]));
            }
        }
        return Err(Error::Underdetermined {
            rank,
            needed: k,
            null_directions,
        });
    }
    let svd = design.clone().svd(true, true);
    let cutoff = svd.singular_values.max() * from_f64::<T>(1e-10);
    let x = svd
        .solve(&rhs, cutoff)
        .map_err(|e| Error::Degeneracy(e.to_string()))?;
    let residual = (&design * &x - &rhs).norm();

    let mut raw = DenseOperator::zeros(modes, particles)?;
    for (col, j) in js.iter().enumerate() {
        raw = raw.add(&j.scale(x[col]));
    }
    // hermitize and project to the density cone
    let herm = raw.add(&raw.adjoint()).scale(from_f64::<T>(0.5));
    let (vals, vecs) = herm.hermitian_eigen();
    let mut clipped_mass = T::zero();
    let mut mat = DMatrix::<C<T>>::zeros(herm.dim(), herm.dim());
    let mut trace = T::zero();
    for (i, &v) in vals.iter().enumerate() {
        if v > T::zero() {
            let col = vecs.column(i);
            mat += col * col.adjoint() * c_re(v);
            trace += v;
        } else {
            clipped_mass += -v;
        }
    }
    if trace <= T::zero() {
        return Err(Error::Degeneracy(
            "reconstruction is identically zero".into(),
        ));
    }
    mat /= c_re(trace);
    let state = InvariantState::certify(DenseOperator::from_matrix(modes, particles, mat)?)?;
    Ok((
        state,
        ReconstructionReport {
            residual,
            rank,
            dimension: k,
            settings: records.len(),
            clipped_mass,
        },
    ))
}

/// Expands a swap-invariant two-particle hermitian operator as
/// Σ_r μ_r A_r ⊗ A_r with hermitian A_r, by diagonalizing its coefficient
/// matrix in the hermitian product basis. Exact and deterministic, with at
/// most M² terms.
pub fn expand_invariant_two_body<T: Scalar>(
    op: &DenseOperator<T>,
) -> Result<Vec<(T, DMatrix<C<T>>)>> {
    let modes = op.modes();
    if op.particles() != 2 {
        return Err(Error::Shape(
            "two-body expansion needs a two-particle operator".into(),
        ));
    }
    let swap = crate::tensor_rep::perm_operator::<T>(
        &crate::symgroup::Permutation::transposition(2, 1, 2)?,
        modes,
    )?;
    if swap.mul(op).mul(&swap).distance(op) > from_f64::<T>(1e-9) {
        return Err(Error::Validation("operator is not swap invariant".into()));
    }
    if !op.is_hermitian(from_f64::<T>(1e-9)) {
        return Err(Error::Validation("operator is not hermitian".into()));
    }
    let basis = hermitian_basis::<T>(modes);
    let m2 = basis.len();
    let norms: Vec<T> = basis.iter().map(|g| (g.adjoint() * g).trace().re).collect();
    // coefficient matrix of O in {G_j ⊗ G_k}: real symmetric by hermiticity
    // and swap invariance
    let mut coeff = DMatrix::<C<T>>::zeros(m2, m2);
    for j in 0..m2 {
        for k in 0..m2 {
            let gjk = DenseOperator::from_matrix(modes, 2, basis[j].kronecker(&basis[k]))?;
            let inner = gjk.adjoint().trace_product(op);
            coeff[(j, k)] = inner / c_re(norms[j] * norms[k]);
        }
    }
    let eig = crate::linalg::hermitian_eigen(&coeff);
    let mut terms = Vec::new();
    for (i, &mu) in eig.values.iter().enumerate() {
        if mu.abs() <= from_f64::<T>(1e-12) {
            continue;
        }
        let mut a = DMatrix::<C<T>>::zeros(modes, modes);
        for (j, g) in basis.iter().enumerate() {
            // eigenvectors of the real symmetric coefficient matrix can be
            // taken real; drop the spurious imaginary part
            a += g * c_re(eig.vectors[(j, i)].re);
        }
        terms.push((mu, a));
    }
    Ok(terms)
}

/// p_2 evaluated through the product expansion of the two-particle
/// symmetric projector: Σ_r μ_r ⟨A_r ⊗ A_r ⊗ 1^(N-2)⟩_ρ. Matches the
/// direct trace; this is the efficiently measurable route.
pub fn p2_from_expansion<T: Scalar>(rho: &InvariantState<T>) -> Result<T> {
    let modes = rho.modes();
    let n = rho.particles();
    if n < 2 {
        return Err(Error::Domain("p_2 needs at least two particles".into()));
    }
    let ps2 = crate::tensor_rep::symmetric_projector::<T>(modes, 2)?;
    let terms = expand_invariant_two_body(&ps2)?;
    let mut total = T::zero();
    for (mu, a) in &terms {
        let aa = DenseOperator::from_matrix(modes, 2, a.kronecker(a))?;
        let full = if n == 2 {
            aa
        } else {
            aa.kron(&DenseOperator::identity(modes, n - 2)?)?
        };
        total += *mu * full.trace_product(rho.operator()).re;
    }
    Ok(total)
}

/// Draws a random hermitian observable in coefficient form; used by tests
/// and the self-test suite.
pub fn random_observable<T: Scalar, R: Rng>(modes: usize, rng: &mut R) -> DMatrix<C<T>> {
    let basis = hermitian_basis::<T>(modes);
    let mut a = DMatrix::<C<T>>::zeros(modes, modes);
    let g = ginibre::<T, R>(1, basis.len(), rng);
    for (j, gj) in basis.iter().enumerate() {
        a += gj * c_re(g[(0, j)].re);
    }
    a
}
