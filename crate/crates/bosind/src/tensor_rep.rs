//! The unitary representation of S_N on (C^M)^⊗N and its derived
//! operators: permutation matrices, symmetric/antisymmetric projectors,
//! Young symmetrizers, the transposition mean T, isotypic projectors and
//! Schur-Weyl block extraction.
//!
//! Permutations act by permuting tensor factors. With the composition
//! convention (p ∘ q)(i) = p(q(i)) the action on basis labels is
//! D(p)|l_1, ..., l_N⟩ = |l_{p⁻¹(1)}, ..., l_{p⁻¹(N)}⟩, which makes
//! D a homomorphism: D(p ∘ q) = D(p) D(q). Group-algebra sums (projectors,
//! symmetrizers, the transposition mean) are insensitive to the π ↔ π⁻¹
//! labeling choice.

use crate::error::{Error, Result};
use crate::operator::{space_dim, DenseOperator};
use crate::scalar::{c_re, from_f64, Scalar, C};
use crate::states::InvariantState;
use crate::symgroup::{
    irrep_character, partitions, permutations, transpositions, OrthogonalIrrep, Partition,
    Permutation, StandardTableau,
};
use nalgebra::DMatrix;

/// Image of a basis index under D(p), as an index map.
pub fn permuted_index(p: &Permutation, index: usize, modes: usize) -> usize {
    let n = p.n();
    // unpack the assignment (0-based modes), first particle most significant
    let mut digits = vec![0usize; n];
    let mut rest = index;
    for i in (0..n).rev() {
        digits[i] = rest % modes;
        rest /= modes;
    }
    let inv = p.inverse();
    let mut out = 0usize;
    for k in 0..n {
        out = out * modes + digits[inv.apply(k)];
    }
    out
}

/// The permutation matrix D(p) on (C^M)^⊗N.
pub fn perm_operator<T: Scalar>(p: &Permutation, modes: usize) -> Result<DenseOperator<T>> {
    let dim = space_dim(modes, p.n())?;
    let mut op = DenseOperator::zeros(modes, p.n())?;
    for j in 0..dim {
        let i = permuted_index(p, j, modes);
        op.matrix_mut()[(i, j)] = C::new(T::one(), T::zero());
    }
    Ok(op)
}

/// Σ_π c_π D(π), assembled through index maps (one pass of O(dim) per
/// permutation instead of a dense matrix product).
pub fn group_algebra_operator<T: Scalar>(
    terms: &[(Permutation, T)],
    modes: usize,
) -> Result<DenseOperator<T>> {
    let n = terms
        .first()
        .map(|(p, _)| p.n())
        .ok_or_else(|| Error::Validation("empty group-algebra sum".into()))?;
    let dim = space_dim(modes, n)?;
    let mut op = DenseOperator::zeros(modes, n)?;
    for (p, coeff) in terms {
        if p.n() != n {
            return Err(Error::Shape("mixed degrees in group-algebra sum".into()));
        }
        for j in 0..dim {
            let i = permuted_index(p, j, modes);
            op.matrix_mut()[(i, j)] += c_re(*coeff);
        }
    }
    Ok(op)
}

/// D(p) · A · D(p)†, applied as an index relabeling.
pub fn conjugate_by_perm<T: Scalar>(op: &DenseOperator<T>, p: &Permutation) -> DenseOperator<T> {
    let modes = op.modes();
    let dim = op.dim();
    let map: Vec<usize> = (0..dim).map(|j| permuted_index(p, j, modes)).collect();
    let mut out = DenseOperator::zeros(modes, op.particles()).expect("same dims as input");
    for r in 0..dim {
        for c in 0..dim {
            out.matrix_mut()[(map[r], map[c])] = op.matrix()[(r, c)];
        }
    }
    out
}

/// Group average (1/N!) Σ_π D(π) A D(π)†: projects onto the commutant of
/// the representation; maps any density operator to an invariant one.
pub fn twirl<T: Scalar>(op: &DenseOperator<T>) -> Result<DenseOperator<T>> {
    let group = permutations(op.particles())?;
    let mut acc = DenseOperator::zeros(op.modes(), op.particles())?;
    for p in &group {
        acc = acc.add(&conjugate_by_perm(op, p));
    }
    Ok(acc.scale(from_f64::<T>(1.0 / group.len() as f64)))
}

/// Projector onto the N-particle symmetric subspace,
/// P_S = (1/N!) Σ_π D(π). Rank C(N+M-1, N).
pub fn symmetric_projector<T: Scalar>(modes: usize, particles: usize) -> Result<DenseOperator<T>> {
    let group = permutations(particles)?;
    let w = from_f64::<T>(1.0 / group.len() as f64);
    let terms: Vec<_> = group.into_iter().map(|p| (p, w)).collect();
    group_algebra_operator(&terms, modes)
}

/// Projector onto the antisymmetric subspace,
/// P_A = (1/N!) Σ_π sgn(π) D(π). Rank C(M, N), zero for N > M.
pub fn antisymmetric_projector<T: Scalar>(
    modes: usize,
    particles: usize,
) -> Result<DenseOperator<T>> {
    let group = permutations(particles)?;
    let w = 1.0 / group.len() as f64;
    let terms: Vec<_> = group
        .into_iter()
        .map(|p| {
            let s = p.sign() as f64 * w;
            (p, from_f64::<T>(s))
        })
        .collect();
    group_algebra_operator(&terms, modes)
}

/// The Young symmetrizer Y_t = a_t · b_t of a standard tableau, represented
/// on (C^M)^⊗N. `a_t` sums the row-preserving subgroup, `b_t` sums the
/// column-preserving subgroup with signs. Proportional to an idempotent;
/// for shape (N) it equals N!·P_S and for shape (1,...,1) it equals N!·P_A.
pub fn young_symmetrizer<T: Scalar>(
    tableau: &StandardTableau,
    modes: usize,
) -> Result<DenseOperator<T>> {
    let n = tableau.n_boxes();
    let rows: Vec<Vec<usize>> = tableau.rows().to_vec();
    let mut cols: Vec<Vec<usize>> = Vec::new();
    let shape = tableau.shape().clone();
    for j in 0..shape.parts()[0] {
        let col: Vec<usize> = tableau
            .rows()
            .iter()
            .filter(|r| r.len() > j)
            .map(|r| r[j])
            .collect();
        cols.push(col);
    }
    let row_group = block_preserving_permutations(&rows, n);
    let col_group = block_preserving_permutations(&cols, n);
    let a_terms: Vec<_> = row_group.into_iter().map(|p| (p, T::one())).collect();
    let b_terms: Vec<_> = col_group
        .into_iter()
        .map(|p| {
            let s = p.sign() as f64;
            (p, from_f64::<T>(s))
        })
        .collect();
    let a = group_algebra_operator(&a_terms, modes)?;
    let b = group_algebra_operator(&b_terms, modes)?;
    Ok(a.mul(&b))
}

/// All permutations of {1..n} preserving each block (given as 1-based
/// entries) setwise.
fn block_preserving_permutations(blocks: &[Vec<usize>], n: usize) -> Vec<Permutation> {
    let mut out = vec![Permutation::identity(n)];
    for block in blocks {
        if block.len() < 2 {
            continue;
        }
        let arrangements = permutations(block.len()).expect("block size <= n <= guard");
        let mut next = Vec::with_capacity(out.len() * arrangements.len());
        for base in &out {
            for arr in &arrangements {
                // permutation sending block[i] -> block[arr(i)], fixing the rest
                let mut map: Vec<usize> = (0..n).collect();
                for (i, &e) in block.iter().enumerate() {
                    map[e - 1] = block[arr.apply(i)] - 1;
                }
                let p = Permutation::from_one_line(&map.iter().map(|&v| v + 1).collect::<Vec<_>>())
                    .expect("bijection by construction");
                next.push(p.compose(base));
            }
        }
        out = next;
    }
    out
}

/// The transposition mean T = (1/C(N,2)) Σ_{i<j} D(π_ij). Hermitian with
/// spectrum {t_λ}, and tr\[Tρ\] = 2p_2 - 1 for invariant ρ.
pub fn transposition_mean<T: Scalar>(modes: usize, particles: usize) -> Result<DenseOperator<T>> {
    if particles < 2 {
        return Err(Error::Domain(format!(
            "transposition mean requires N >= 2, got {particles}"
        )));
    }
    let trans = transpositions(particles);
    let w = from_f64::<T>(1.0 / trans.len() as f64);
    let terms: Vec<_> = trans.into_iter().map(|p| (p, w)).collect();
    group_algebra_operator(&terms, modes)
}

/// Projector onto the λ-isotypic component:
/// P_λ = (d_λ/N!) Σ_π χ_λ(π) D(π). Mutually orthogonal across λ, complete,
/// and P_(N) = P_S.
pub fn isotypic_projector<T: Scalar>(
    lam: &Partition,
    modes: usize,
    particles: usize,
) -> Result<DenseOperator<T>> {
    if lam.n_boxes() != particles {
        return Err(Error::Shape(format!(
            "partition {lam} is not a partition of N = {particles}"
        )));
    }
    let group = permutations(particles)?;
    let scale = lam.hook_dimension() as f64 / group.len() as f64;
    let terms: Vec<_> = group
        .into_iter()
        .map(|p| {
            let chi = irrep_character(lam, &p.cycle_type()).expect("matching box counts") as f64;
            (p, from_f64::<T>(chi * scale))
        })
        .collect();
    group_algebra_operator(&terms, modes)
}

/// Isometry W_λ: C^{m_λ} ⊗ C^{d_λ} → (C^M)^⊗N onto the λ-isotypic
/// component, satisfying D(π) W = W (1 ⊗ Y_λ(π)) with Y_λ the orthogonal
/// irrep. Columns are ordered multiplicity-major: column a·d_λ + j.
///
/// The multiplicity basis is fixed by the matrix unit E_11 of the
/// orthogonal irrep (eigenvectors of E_11 in decreasing-eigenvalue order);
/// this pins the otherwise arbitrary unitary freedom of the block basis.
pub struct IsotypicIsometry<T: Scalar> {
    pub partition: Partition,
    pub multiplicity: usize,
    pub irrep_dim: usize,
    /// dim × (multiplicity · irrep_dim) matrix with orthonormal columns.
    pub matrix: DMatrix<C<T>>,
}

pub fn isotypic_isometry<T: Scalar>(
    lam: &Partition,
    modes: usize,
    particles: usize,
) -> Result<IsotypicIsometry<T>> {
    let dim = space_dim(modes, particles)?;
    let mult = lam.tensor_multiplicity(modes);
    let rep = OrthogonalIrrep::new(lam);
    let d = rep.dim();
    if mult == 0 {
        return Ok(IsotypicIsometry {
            partition: lam.clone(),
            multiplicity: 0,
            irrep_dim: d,
            matrix: DMatrix::zeros(dim, 0),
        });
    }
    let group = permutations(particles)?;
    let scale = d as f64 / group.len() as f64;

    // matrix units E_{j1} = (d/N!) Σ_π [Y_λ(π)]_{j1} D(π)
    let mut units: Vec<DenseOperator<T>> = Vec::with_capacity(d);
    for j in 0..d {
        let terms: Vec<_> = group
            .iter()
            .map(|p| {
                let y = rep.matrix::<T>(p);
                (p.clone(), y[(j, 0)] * from_f64::<T>(scale))
            })
            .collect();
        units.push(group_algebra_operator(&terms, modes)?);
    }

    // ONB of range(E_11): eigenvectors with eigenvalue ~ 1
    let (vals, vecs) = units[0].hermitian_eigen();
    let kept: Vec<usize> = (0..dim).filter(|&i| vals[i] > from_f64::<T>(0.5)).collect();
    if kept.len() != mult {
        return Err(Error::Degeneracy(format!(
            "E_11 rank {} does not match multiplicity {mult} for {lam}",
            kept.len()
        )));
    }

    let mut w = DMatrix::zeros(dim, mult * d);
    for (a, &col) in kept.iter().enumerate() {
        let base = vecs.column(col).into_owned();
        for (j, unit) in units.iter().enumerate() {
            let v = unit.matrix() * &base;
            w.set_column(a * d + j, &v);
        }
    }
    Ok(IsotypicIsometry {
        partition: lam.clone(),
        multiplicity: mult,
        irrep_dim: d,
        matrix: w,
    })
}

/// One λ-block of an invariant state: weight p_λ, the multiplicity-space
/// density matrix ρ_λ, and the isometry used to extract it.
pub struct SchurBlock<T: Scalar> {
    pub partition: Partition,
    pub weight: T,
    /// Density matrix on the multiplicity space (m_λ × m_λ); zero matrix
    /// when the weight vanishes.
    pub rho: DMatrix<C<T>>,
    pub irrep_dim: usize,
    pub multiplicity: usize,
    pub isometry: DMatrix<C<T>>,
}

/// Block decomposition ρ = ⊕_λ p_λ ρ_λ ⊗ 1/d_λ of an invariant state.
pub struct SchurBlocks<T: Scalar> {
    pub modes: usize,
    pub particles: usize,
    pub blocks: Vec<SchurBlock<T>>,
}

impl<T: Scalar> SchurBlocks<T> {
    /// Weight of the symmetric block λ = (N); equals p_N.
    pub fn symmetric_weight(&self) -> T {
        self.blocks
            .iter()
            .find(|b| b.partition == Partition::row(self.particles))
            .map(|b| b.weight)
            .unwrap_or_else(T::zero)
    }

    pub fn total_weight(&self) -> T {
        self.blocks.iter().fold(T::zero(), |acc, b| acc + b.weight)
    }

    /// Rebuilds Σ_λ p_λ W_λ (ρ_λ ⊗ 1/d_λ) W_λ†; must reproduce the input
    /// state up to numerical error.
    pub fn reassemble(&self) -> Result<DenseOperator<T>> {
        let mut acc = DenseOperator::zeros(self.modes, self.particles)?;
        for block in &self.blocks {
            if block.multiplicity == 0 {
                continue;
            }
            let d = block.irrep_dim;
            let m = block.multiplicity;
            let mut inner = DMatrix::zeros(m * d, m * d);
            let inv_d = from_f64::<T>(1.0 / d as f64);
            for a in 0..m {
                for b in 0..m {
                    for j in 0..d {
                        inner[(a * d + j, b * d + j)] =
                            block.rho[(a, b)] * c_re(block.weight * inv_d);
                    }
                }
            }
            let contrib = &block.isometry * inner * block.isometry.adjoint();
            acc.matrix_mut().zip_apply(&contrib, |x, y| *x += y);
        }
        Ok(acc)
    }
}

/// Decomposes a certified invariant state into its Schur-Weyl blocks.
///
/// Weights are p_λ = tr[P_λ ρ]; the multiplicity-space density matrices are
/// obtained by compressing with [`isotypic_isometry`] and tracing out the
/// irrep factor. ρ_λ is only defined up to the unitary basis freedom of the
/// multiplicity space; the E_11 convention above fixes it.
pub fn schur_weyl_blocks<T: Scalar>(rho: &InvariantState<T>) -> Result<SchurBlocks<T>> {
    let modes = rho.modes();
    let particles = rho.particles();
    let weight_cutoff = from_f64::<T>(1e-14);
    let mut blocks = Vec::new();
    for lam in partitions(particles, modes.min(particles)) {
        let iso = isotypic_isometry::<T>(&lam, modes, particles)?;
        if iso.multiplicity == 0 {
            continue;
        }
        let proj = isotypic_projector::<T>(&lam, modes, particles)?;
        let weight = proj.trace_product(rho.operator()).re;
        let m = iso.multiplicity;
        let d = iso.irrep_dim;
        let mut rho_block = DMatrix::zeros(m, m);
        if weight > weight_cutoff {
            let compressed = iso.matrix.adjoint() * rho.operator().matrix() * &iso.matrix;
            for a in 0..m {
                for b in 0..m {
                    let mut acc = C::new(T::zero(), T::zero());
                    for j in 0..d {
                        acc += compressed[(a * d + j, b * d + j)];
                    }
                    rho_block[(a, b)] = acc / c_re(weight);
                }
            }
        }
        blocks.push(SchurBlock {
            partition: lam,
            weight: if weight > weight_cutoff {
                weight
            } else {
                T::zero()
            },
            rho: rho_block,
            irrep_dim: d,
            multiplicity: m,
            isometry: iso.matrix,
        });
    }
    Ok(SchurBlocks {
        modes,
        particles,
        blocks,
    })
}

/// U^⊗N as a dense operator; `u` must be M × M.
pub fn tensor_power<T: Scalar>(u: &DMatrix<C<T>>, particles: usize) -> Result<DenseOperator<T>> {
    let modes = u.nrows();
    if u.ncols() != modes {
        return Err(Error::Shape("single-particle matrix must be square".into()));
    }
    space_dim(modes, particles)?;
    let mut mat = u.clone();
    for _ in 1..particles {
        mat = mat.kronecker(u);
    }
    DenseOperator::from_matrix(modes, particles, mat)
}
