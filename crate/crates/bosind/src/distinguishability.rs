//! Perfect-distinguishability certification and the canonical form.
//!
//! A state ρ = Σ_k q_k P_k (spectral decomposition, q_k > 0) describes
//! perfectly distinguishable particles iff the character of the S_N action
//! restricted to every eigenspace vanishes away from the identity, i.e.
//! tr[D(π) P_k] = dim(V_k) δ_{π,id}. Each eigenspace then carries an
//! integer number i_k of copies of the regular representation, and a
//! permutation-invariant unitary maps the state onto a mixture of
//! computational-basis orbits of strictly increasing mode assignments.
//!
//! The unitary is built constructively: random vectors in each eigenspace
//! are spread over the group orbit and Löwdin-orthogonalized, which
//! preserves the column covariance D(σ)A = A(1 ⊗ R(σ)) and therefore
//! yields an exact intertwiner; the kernel is matched to the remaining
//! orbit complement blockwise per isotypic component with twirled random
//! maps, unitarized the same way.

use crate::error::{Error, Result};
use crate::operator::{DenseOperator, ModeAssignment};
use crate::random::ginibre;
use crate::scalar::{c_re, from_f64, to_f64, Scalar, C};
use crate::states::{spectral_eigenspaces, InvariantState, CLUSTER_TOL};
use crate::symgroup::{partitions, permutations, CycleType, Partition, Permutation};
use crate::tensor_rep::{isotypic_projector, permuted_index, symmetric_projector, twirl};
use nalgebra::{ComplexField, DMatrix};
use rand::Rng;

/// Default relative tolerance for a character value to count as vanishing:
/// |tr[π P_k]| < tol · rank(P_k).
pub const CHARACTER_TOL: f64 = 1e-8;

/// Character of the S_N action restricted to an invariant subspace,
/// tabulated per conjugacy class.
#[derive(Debug, Clone)]
pub struct CharacterProfile<T: Scalar> {
    /// Rank of the projector (value of the character at the identity).
    pub dim: usize,
    /// One complex value per cycle type, in the fixed partition order.
    pub values: Vec<(CycleType, C<T>)>,
}

/// Traces tr[D(π) P_k] grouped by conjugacy class. Fails if the projector
/// does not commute with the group action or the traces are not constant
/// on classes (both symptoms of a non-invariant subspace).
pub fn character_profile<T: Scalar>(p_k: &DenseOperator<T>) -> Result<CharacterProfile<T>> {
    let n = p_k.particles();
    let group = permutations(n)?;
    for gen in crate::symgroup::adjacent_transpositions(n) {
        let d = crate::tensor_rep::perm_operator::<T>(&gen, p_k.modes())?;
        if p_k.commutator_norm(&d) > from_f64::<T>(1e-8) {
            return Err(Error::Invariance(
                "projector does not commute with the permutation action".into(),
            ));
        }
    }
    let mut per_class: Vec<(CycleType, Vec<C<T>>)> = Vec::new();
    for p in &group {
        let d = crate::tensor_rep::perm_operator::<T>(&p.clone(), p_k.modes())?;
        let value = d.trace_product(p_k);
        let class = p.cycle_type();
        match per_class.iter_mut().find(|(c, _)| *c == class) {
            Some((_, vals)) => vals.push(value),
            None => per_class.push((class, vec![value])),
        }
    }
    let mut values = Vec::new();
    let mut dim = 0usize;
    for (class, vals) in per_class {
        let first = vals[0];
        for v in &vals {
            if (*v - first).modulus() > from_f64::<T>(1e-9) * from_f64::<T>(vals.len() as f64) {
                return Err(Error::Invariance(format!(
                    "character not constant on class {class}"
                )));
            }
        }
        if class == Partition::column(class.n_boxes()) {
            dim = to_f64(first.re).round() as usize;
        }
        values.push((class, first));
    }
    Ok(CharacterProfile { dim, values })
}

/// Multiplicity of the regular representation in an invariant subspace
/// whose character vanishes off the identity: rank(P_k)/N!. A non-integer
/// ratio signals that the vanishing condition is violated.
pub fn regular_multiplicity<T: Scalar>(p_k: &DenseOperator<T>) -> Result<usize> {
    let n = p_k.particles();
    let fact: usize = (1..=n).product();
    let rank = to_f64(p_k.trace_re()).round() as usize;
    if rank == 0 || !rank.is_multiple_of(fact) {
        return Err(Error::NotRegular(format!(
            "rank {rank} is not a positive multiple of N! = {fact}"
        )));
    }
    Ok(rank / fact)
}

/// Outcome of the perfect-distinguishability certification.
#[derive(Debug, Clone)]
pub struct Certificate<T: Scalar> {
    /// True iff every eigenspace character vanishes off the identity class.
    pub distinguishable: bool,
    /// Regular-representation multiplicities i_k per eigenspace (only
    /// meaningful on a positive verdict).
    pub multiplicities: Vec<usize>,
    /// First violation found: (cycle type, eigenspace index).
    pub witness: Option<(CycleType, usize)>,
    /// tr[P_S ρ]; equals 1/N! for perfectly distinguishable states.
    pub symmetric_weight: T,
    /// Eigenvalue clustering was ambiguous; the verdict may be sensitive to
    /// the clustering tolerance.
    pub degenerate: bool,
}

/// Certifies perfect distinguishability of an invariant state. `tol` is
/// the relative character-vanishing tolerance ([`CHARACTER_TOL`] by
/// default); eigenvalue clustering uses the states module default.
pub fn is_perfectly_distinguishable<T: Scalar>(
    rho: &InvariantState<T>,
    tol: T,
) -> Result<Certificate<T>> {
    let n = rho.particles();
    let fact: usize = (1..=n).product();
    let spaces = spectral_eigenspaces(rho, from_f64::<T>(CLUSTER_TOL))?;
    let ps = symmetric_projector::<T>(rho.modes(), n)?;
    let symmetric_weight = ps.trace_product(rho.operator()).re;

    let mut multiplicities = Vec::new();
    let mut witness: Option<(CycleType, usize)> = None;

    'spaces: for (k, space) in spaces.spaces.iter().enumerate() {
        let profile = character_profile(&space.projector)?;
        let threshold = tol * from_f64::<T>(space.rank.max(1) as f64);
        for (class, value) in &profile.values {
            let is_id = *class == Partition::column(n);
            if !is_id && value.modulus() > threshold {
                witness = Some((class.clone(), k));
                break 'spaces;
            }
        }
        if space.rank % fact != 0 {
            witness = Some((Partition::column(n), k));
            break 'spaces;
        }
        multiplicities.push(space.rank / fact);
    }

    let distinguishable = witness.is_none();
    if distinguishable {
        // consequence of the characterization: the symmetric weight is
        // pinned at 1/N!
        let expected = from_f64::<T>(1.0 / fact as f64);
        if (symmetric_weight - expected).abs() > tol * from_f64::<T>(10.0) {
            return Err(Error::Degeneracy(format!(
                "verdict positive but tr[P_S ρ] = {:?} differs from 1/N!",
                symmetric_weight
            )));
        }
    }
    Ok(Certificate {
        distinguishable,
        multiplicities: if distinguishable {
            multiplicities
        } else {
            Vec::new()
        },
        witness,
        symmetric_weight,
        degenerate: spaces.degenerate,
    })
}

/// Canonical form of a perfectly distinguishable state: a permutation
/// invariant unitary U and strictly increasing mode assignments b(k, l)
/// such that U ρ U† = Σ_k q_k Σ_l Σ_{orbit} |π b(k,l)⟩⟨π b(k,l)|.
pub struct CanonicalForm<T: Scalar> {
    pub unitary: DenseOperator<T>,
    pub assignments: Vec<ModeAssignment>,
    pub certificate: Certificate<T>,
}

/// Strictly increasing N-tuples over {1..M} in lexicographic order.
fn increasing_assignments(modes: usize, particles: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=particles).collect();
    if particles > modes {
        return out;
    }
    loop {
        out.push(current.clone());
        // next combination in lex order
        let mut i = particles;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < modes - (particles - 1 - i) {
                break;
            }
        }
        if current[i] >= modes - (particles - 1 - i) {
            return out;
        }
        current[i] += 1;
        for j in (i + 1)..particles {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Builds the canonical form. Randomness (orbit seeds and the kernel
/// intertwiner) comes from the caller's RNG; the construction retries a
/// few times if a random draw happens to be degenerate.
pub fn canonical_form<T: Scalar, R: Rng>(
    rho: &InvariantState<T>,
    rng: &mut R,
) -> Result<CanonicalForm<T>> {
    let certificate = is_perfectly_distinguishable(rho, from_f64::<T>(CHARACTER_TOL))?;
    if !certificate.distinguishable {
        let detail = certificate
            .witness
            .as_ref()
            .map(|(c, k)| format!("eigenspace {k} has nonvanishing character on class {c}"))
            .unwrap_or_default();
        return Err(Error::NotDistinguishable(detail));
    }
    let modes = rho.modes();
    let n = rho.particles();
    if modes < n {
        return Err(Error::NotDistinguishable(format!(
            "perfectly distinguishable states need M >= N, got M = {modes}, N = {n}"
        )));
    }
    let group = permutations(n)?;
    let fact = group.len();
    let dim = rho.operator().dim();
    let spaces = spectral_eigenspaces(rho, from_f64::<T>(CLUSTER_TOL))?;

    // allocate target assignments greedily in lexicographic order
    let total_copies: usize = certificate.multiplicities.iter().sum();
    let available = increasing_assignments(modes, n);
    if total_copies > available.len() {
        return Err(Error::Degeneracy(format!(
            "need {total_copies} orbit assignments but only {} exist",
            available.len()
        )));
    }
    let assignments: Vec<ModeAssignment> = available
        .into_iter()
        .take(total_copies)
        .map(|entries| ModeAssignment::new(entries, modes))
        .collect::<Result<_>>()?;

    // target orthonormal columns: orbit vectors in group order per copy
    let mut target = DMatrix::<C<T>>::zeros(dim, total_copies * fact);
    for (copy, assignment) in assignments.iter().enumerate() {
        for (g, p) in group.iter().enumerate() {
            let idx = permuted_index(p, assignment.index(), modes);
            target[(idx, copy * fact + g)] = c_re(T::one());
        }
    }

    // source orthonormal columns: Löwdin-orthogonalized random orbits per
    // eigenspace
    let mut source = DMatrix::<C<T>>::zeros(dim, total_copies * fact);
    let mut copy_offset = 0usize;
    for (space, &mult) in spaces.spaces.iter().zip(&certificate.multiplicities) {
        let cols = mult * fact;
        let b = orbit_orthonormal_basis(&space.projector, mult, &group, rng)?;
        source
            .view_mut((0, copy_offset * fact), (dim, cols))
            .copy_from(&b);
        copy_offset += mult;
    }

    let mut unitary_mat = &target * source.adjoint();

    // match the kernel of ρ to the complement of the target orbits,
    // isotypic block by isotypic block
    let range_s = &source * source.adjoint();
    let range_t = &target * target.adjoint();
    let q_s = DMatrix::<C<T>>::identity(dim, dim) - range_s;
    let q_t = DMatrix::<C<T>>::identity(dim, dim) - range_t;
    for lam in partitions(n, modes.min(n)) {
        let proj = isotypic_projector::<T>(&lam, modes, n)?.into_matrix();
        let ps = &proj * &q_s;
        let pt = &proj * &q_t;
        let dim_s = ps.trace().re;
        let dim_t = pt.trace().re;
        let ds = to_f64(dim_s).round() as usize;
        if ds != to_f64(dim_t).round() as usize {
            return Err(Error::Degeneracy(format!(
                "complement multiplicities differ in block {lam}"
            )));
        }
        if ds == 0 {
            continue;
        }
        let block = intertwiner_between(&pt, &ps, modes, n, ds, rng)?;
        unitary_mat += block;
    }

    let unitary = DenseOperator::from_matrix(modes, n, unitary_mat)?;
    let id = DenseOperator::identity(modes, n)?;
    if unitary.mul(&unitary.adjoint()).distance(&id) > from_f64::<T>(1e-8) {
        return Err(Error::Degeneracy(
            "constructed map failed the unitarity check".into(),
        ));
    }
    Ok(CanonicalForm {
        unitary,
        assignments,
        certificate,
    })
}

/// Orthonormal basis of an eigenspace carrying `mult` regular copies, with
/// columns ordered (copy, group element) and covariance
/// D(σ) B = B (1 ⊗ R(σ)). Symmetric (Löwdin) orthogonalization of the
/// random orbit matrix preserves the covariance because the Gram matrix
/// commutes with 1 ⊗ R(σ).
fn orbit_orthonormal_basis<T: Scalar, R: Rng>(
    projector: &DenseOperator<T>,
    mult: usize,
    group: &[Permutation],
    rng: &mut R,
) -> Result<DMatrix<C<T>>> {
    let dim = projector.dim();
    let fact = group.len();
    let modes = projector.modes();
    for _attempt in 0..4 {
        let seeds = projector.matrix() * ginibre::<T, R>(dim, mult, rng);
        let mut a = DMatrix::<C<T>>::zeros(dim, mult * fact);
        for j in 0..mult {
            for (g, p) in group.iter().enumerate() {
                let mapped: Vec<usize> = (0..dim).map(|r| permuted_index(p, r, modes)).collect();
                for r in 0..dim {
                    a[(mapped[r], j * fact + g)] = seeds[(r, j)];
                }
            }
        }
        let gram = a.adjoint() * &a;
        let eig = crate::linalg::hermitian_eigen(&gram);
        let min = *eig.values.last().expect("nonempty gram");
        let max = eig.values[0];
        if min < from_f64::<T>(1e-10) * max.max(T::one()) {
            continue;
        }
        let k = gram.nrows();
        let mut inv_sqrt = DMatrix::<C<T>>::zeros(k, k);
        for (i, &v) in eig.values.iter().enumerate() {
            let col = eig.vectors.column(i);
            inv_sqrt += col * col.adjoint() * c_re(T::one() / v.sqrt());
        }
        return Ok(a * inv_sqrt);
    }
    Err(Error::Degeneracy(
        "orbit Gram matrix stayed singular across retries".into(),
    ))
}

/// Partial isometry from range(ps) onto range(pt) commuting with the group
/// action: polar part of the twirled random map pt · G · ps.
fn intertwiner_between<T: Scalar, R: Rng>(
    pt: &DMatrix<C<T>>,
    ps: &DMatrix<C<T>>,
    modes: usize,
    particles: usize,
    block_dim: usize,
    rng: &mut R,
) -> Result<DMatrix<C<T>>> {
    let dim = ps.nrows();
    for _attempt in 0..4 {
        let g = ginibre::<T, R>(dim, dim, rng);
        let raw = DenseOperator::from_matrix(modes, particles, pt * g * ps)?;
        let x = twirl(&raw)?.into_matrix();
        let gram = x.adjoint() * &x;
        let eig = crate::linalg::hermitian_eigen(&gram);
        // pseudo-inverse square root on the support
        let support: Vec<usize> = (0..dim)
            .filter(|&i| eig.values[i] > from_f64::<T>(1e-10) * eig.values[0].max(T::one()))
            .collect();
        if support.len() != block_dim {
            continue;
        }
        let mut inv_sqrt = DMatrix::<C<T>>::zeros(dim, dim);
        for &i in &support {
            let col = eig.vectors.column(i);
            inv_sqrt += col * col.adjoint() * c_re(T::one() / eig.values[i].sqrt());
        }
        return Ok(x * inv_sqrt);
    }
    Err(Error::Degeneracy(
        "kernel intertwiner stayed rank-deficient across retries".into(),
    ))
}

/// The diagonal state the canonical form maps onto:
/// Σ_k q_k Σ_l Σ_π π|b(k,l)⟩⟨b(k,l)|π†, given eigenvalues per copy.
pub fn canonical_diagonal<T: Scalar>(weights: &[(T, ModeAssignment)]) -> Result<DenseOperator<T>> {
    let first = weights
        .first()
        .ok_or_else(|| Error::Validation("no assignments".into()))?;
    let modes = first.1.modes();
    let n = first.1.particles();
    let group = permutations(n)?;
    let mut op = DenseOperator::zeros(modes, n)?;
    for (q, assignment) in weights {
        for p in &group {
            let idx = permuted_index(p, assignment.index(), modes);
            op.matrix_mut()[(idx, idx)] = c_re(*q);
        }
    }
    Ok(op)
}
