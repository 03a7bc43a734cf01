//! Constructors and certification for permutation-invariant external
//! density matrices.
//!
//! An [`InvariantState`] is a density operator certified positive
//! semidefinite, unit trace, and invariant under the S_N action. Invariance
//! is checked on the generating set of adjacent transpositions, which is
//! sufficient by group closure.

use crate::error::{Error, Result};
use crate::operator::{DenseOperator, ModeAssignment, StateVector};
use crate::random::random_density;
use crate::scalar::{c_re, from_f64, Scalar, C};
use crate::symgroup::{adjacent_transpositions, permutations};
use crate::tensor_rep::{antisymmetric_projector, conjugate_by_perm, symmetric_projector, twirl};
use nalgebra::DMatrix;
use rand::Rng;

/// Positivity slack: the smallest eigenvalue may be this far below zero.
pub const PSD_TOL: f64 = 1e-10;
/// Unit-trace certification tolerance.
pub const TRACE_TOL: f64 = 1e-10;
/// Default invariance tolerance (Frobenius norm per adjacent transposition).
pub const INVARIANCE_TOL: f64 = 1e-9;

/// A density operator on (C^M)^⊗N certified permutation invariant.
#[derive(Debug, Clone)]
pub struct InvariantState<T: Scalar> {
    op: DenseOperator<T>,
    tol: T,
}

impl<T: Scalar> InvariantState<T> {
    /// Certifies positivity, unit trace and permutation invariance at the
    /// default tolerance.
    pub fn certify(op: DenseOperator<T>) -> Result<Self> {
        Self::certify_with(op, from_f64::<T>(INVARIANCE_TOL))
    }

    /// Certifies with a caller-chosen invariance tolerance.
    pub fn certify_with(op: DenseOperator<T>, tol: T) -> Result<Self> {
        let trace = op.trace();
        if (trace.re - T::one()).abs() > from_f64::<T>(TRACE_TOL)
            || trace.im.abs() > from_f64::<T>(TRACE_TOL)
        {
            return Err(Error::NotDensity(format!(
                "trace is {:?}, expected 1",
                trace
            )));
        }
        if !op.is_hermitian(from_f64::<T>(1e-9)) {
            return Err(Error::NotDensity("operator is not hermitian".into()));
        }
        // fast path: a Cholesky factorization of ρ + tol·1 certifies the
        // spectrum down to -tol; fall back to the eigensolver near the edge
        let dim = op.dim();
        let shifted = op.matrix()
            + DMatrix::<C<T>>::identity(dim, dim).map(|x| x * c_re(from_f64::<T>(PSD_TOL)));
        if shifted.cholesky().is_none() {
            let (vals, _) = op.hermitian_eigen();
            if let Some(&min) = vals.last() {
                if min < -from_f64::<T>(PSD_TOL) {
                    return Err(Error::NotDensity(format!(
                        "smallest eigenvalue {min:?} is negative"
                    )));
                }
            }
        }
        if let Some((pair, defect)) = invariance_defect(&op) {
            if defect > tol {
                return Err(Error::Invariance(format!(
                    "worst transposition ({} {}) moves the state by {defect:?}",
                    pair.0, pair.1
                )));
            }
        }
        Ok(InvariantState { op, tol })
    }

    pub fn operator(&self) -> &DenseOperator<T> {
        &self.op
    }

    pub fn into_operator(self) -> DenseOperator<T> {
        self.op
    }

    pub fn modes(&self) -> usize {
        self.op.modes()
    }

    pub fn particles(&self) -> usize {
        self.op.particles()
    }

    pub fn tolerance(&self) -> T {
        self.tol
    }
}

/// Largest invariance defect over adjacent transpositions, with the
/// offending (1-based) pair. `None` for single-particle spaces.
pub fn invariance_defect<T: Scalar>(op: &DenseOperator<T>) -> Option<((usize, usize), T)> {
    let n = op.particles();
    let mut worst: Option<((usize, usize), T)> = None;
    for (k, p) in adjacent_transpositions(n).iter().enumerate() {
        let moved = conjugate_by_perm(op, p);
        let defect = moved.distance(op);
        if worst.as_ref().is_none_or(|w| defect > w.1) {
            worst = Some(((k + 1, k + 2), defect));
        }
    }
    worst
}

/// True iff the operator is invariant under every adjacent transposition
/// within `tol` (hence, by closure, under all of S_N).
pub fn is_invariant<T: Scalar>(op: &DenseOperator<T>, tol: T) -> bool {
    invariance_defect(op).is_none_or(|(_, d)| d <= tol)
}

/// The Dicke state of a mode assignment: the normalized symmetrization of
/// |l_1 ... l_N⟩. Pure, with p_N = 1.
pub fn dicke_state<T: Scalar>(assignment: &ModeAssignment) -> Result<InvariantState<T>> {
    let modes = assignment.modes();
    let n = assignment.particles();
    let ps = symmetric_projector::<T>(modes, n)?;
    let mut v: StateVector<T> = ps.matrix().column(assignment.index()).into_owned();
    let norm = v.norm();
    if norm <= from_f64::<T>(1e-300) {
        return Err(Error::Validation(format!(
            "assignment {assignment} has no symmetric component"
        )));
    }
    v /= c_re(norm);
    InvariantState::certify(DenseOperator::pure(modes, n, &v)?)
}

/// The totally antisymmetric state on N particles in N modes:
/// |AS_N⟩ ∝ Σ_π sgn(π) π|1...N⟩. Orthogonal to the symmetric subspace,
/// with tr\[Tρ\] = -1.
pub fn antisymmetric_state<T: Scalar>(n: usize) -> Result<InvariantState<T>> {
    let assignment = ModeAssignment::new((1..=n).collect(), n)?;
    let pa = antisymmetric_projector::<T>(n, n)?;
    let mut v: StateVector<T> = pa.matrix().column(assignment.index()).into_owned();
    let norm = v.norm();
    v /= c_re(norm);
    InvariantState::certify(DenseOperator::pure(n, n, &v)?)
}

/// The fixed-mode-occupation classical mixture
/// ρ = (1/N!) Σ_π π |l⟩⟨l| π†, diagonal in the computational basis.
/// For assignments with distinct entries, tr[P_S ρ] = 1/N!.
pub fn classical_mixture<T: Scalar>(assignment: &ModeAssignment) -> Result<InvariantState<T>> {
    let modes = assignment.modes();
    let n = assignment.particles();
    let group = permutations(n)?;
    let mut op = DenseOperator::zeros(modes, n)?;
    let w = from_f64::<T>(1.0 / group.len() as f64);
    for p in &group {
        let idx = crate::tensor_rep::permuted_index(p, assignment.index(), modes);
        op.matrix_mut()[(idx, idx)] += c_re(w);
    }
    InvariantState::certify(op)
}

/// A random invariant state: the group average (twirl) of a random
/// full-rank density operator.
pub fn random_invariant<T: Scalar, R: Rng>(
    modes: usize,
    particles: usize,
    rng: &mut R,
) -> Result<InvariantState<T>> {
    let sigma = random_density::<T, R>(modes, particles, rng)?;
    InvariantState::certify(twirl(&sigma)?)
}

/// One eigenspace of an invariant state: eigenvalue, projector onto the
/// clustered eigenvectors, and its rank.
#[derive(Debug, Clone)]
pub struct Eigenspace<T: Scalar> {
    pub value: T,
    pub projector: DenseOperator<T>,
    pub rank: usize,
}

/// Spectral eigenspaces of an invariant state, restricted to nonzero
/// eigenvalues. Eigenspace projectors of invariant states commute with the
/// whole S_N action.
#[derive(Debug, Clone)]
pub struct Eigenspaces<T: Scalar> {
    pub spaces: Vec<Eigenspace<T>>,
    /// Set when two clusters are separated by less than 10x the clustering
    /// tolerance; distinguishability certification is sensitive to this.
    pub degenerate: bool,
}

/// Default eigenvalue clustering tolerance.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Clusters the spectrum of ρ into eigenspaces with distinct eigenvalues.
/// Eigenvalues within `tol` of each other are merged; clusters with
/// eigenvalue below 10·tol count as the kernel and are dropped.
pub fn spectral_eigenspaces<T: Scalar>(rho: &InvariantState<T>, tol: T) -> Result<Eigenspaces<T>> {
    let (vals, vecs) = rho.operator().hermitian_eigen();
    let dim = vals.len();
    let zero_cutoff = from_f64::<T>(10.0) * tol;

    let mut clusters: Vec<(usize, usize)> = Vec::new(); // [start, end)
    let mut start = 0usize;
    for i in 1..=dim {
        if i == dim || (vals[i - 1] - vals[i]) > tol {
            clusters.push((start, i));
            start = i;
        }
    }

    let mut degenerate = false;
    for w in clusters.windows(2) {
        let gap = vals[w[0].1 - 1] - vals[w[1].0];
        if gap < from_f64::<T>(10.0) * tol {
            degenerate = true;
        }
    }

    let mut spaces = Vec::new();
    for &(a, b) in &clusters {
        let mean = (a..b).fold(T::zero(), |acc, i| acc + vals[i]) / from_f64::<T>((b - a) as f64);
        if mean <= zero_cutoff {
            continue;
        }
        let mut proj = DMatrix::<C<T>>::zeros(dim, dim);
        for i in a..b {
            let v = vecs.column(i);
            proj += v * v.adjoint();
        }
        spaces.push(Eigenspace {
            value: mean,
            projector: DenseOperator::from_matrix(rho.modes(), rho.particles(), proj)?,
            rank: b - a,
        });
    }
    Ok(Eigenspaces { spaces, degenerate })
}

/// The canonical permutation-symmetric purification
/// |ψ⟩ = (1 ⊗ √ρᵀ) Σ_i |i⟩|i⟩ on a doubled external space, using the
/// identity intertwiner on the purifying copy. Satisfies
/// (π ⊗ π)|ψ⟩ = |ψ⟩ and traces back to ρ over the second factor.
pub fn symmetric_purification<T: Scalar>(rho: &InvariantState<T>) -> Result<StateVector<T>> {
    let dim = rho.operator().dim();
    let sqrt_t = rho.operator().sqrt_psd(from_f64::<T>(PSD_TOL))?.transpose();
    let b = sqrt_t.matrix();
    let mut psi = StateVector::<T>::zeros(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            psi[i * dim + j] = b[(j, i)];
        }
    }
    Ok(psi)
}

/// A fixed-mode-occupation state on 3 particles in 3 modes whose
/// permutation traces all vanish, tr[ρ D(π)] = 0 for π ≠ id, yet whose
/// eigenspaces do not carry regular representations (so it is not
/// perfectly distinguishable). Matrix entries are pinned in the orbit
/// basis {π|123⟩} ordered lexicographically:
/// |123⟩, |132⟩, |213⟩, |231⟩, |312⟩, |321⟩.
pub fn permutation_traceless_state<T: Scalar>() -> Result<InvariantState<T>> {
    let a = 1.0 / 6.0;
    let b = 1.0 / 9.0;
    let c = -5.0 / 90.0;
    #[rustfmt::skip]
    let entries: [[f64; 6]; 6] = [
        [a, b, c, 0.0, 0.0, c],
        [b, a, 0.0, c, c, 0.0],
        [c, 0.0, a, c, b, 0.0],
        [0.0, c, c, a, 0.0, b],
        [0.0, c, b, 0.0, a, c],
        [c, 0.0, 0.0, b, c, a],
    ];
    let orbit: Vec<usize> = {
        let mut arrangements: Vec<Vec<usize>> = permutations(3)?
            .iter()
            .map(|p| {
                let base = [1usize, 2, 3];
                let inv = p.inverse();
                (0..3).map(|k| base[inv.apply(k)]).collect()
            })
            .collect();
        arrangements.sort();
        arrangements
            .into_iter()
            .map(|l| ModeAssignment::new(l, 3).unwrap().index())
            .collect()
    };
    let mut op = DenseOperator::zeros(3, 3)?;
    for r in 0..6 {
        for cidx in 0..6 {
            op.matrix_mut()[(orbit[r], orbit[cidx])] =
                C::new(from_f64::<T>(entries[r][cidx]), T::zero());
        }
    }
    InvariantState::certify(op)
}

/// √ρ renormalized to unit trace. Used as the companion counterexample to
/// [`permutation_traceless_state`]: it satisfies tr[(ρ')² π] = 0 for all
/// π ≠ id.
pub fn normalized_sqrt<T: Scalar>(rho: &InvariantState<T>) -> Result<InvariantState<T>> {
    let s = rho.operator().sqrt_psd(from_f64::<T>(PSD_TOL))?;
    let tr = s.trace_re();
    if tr <= from_f64::<T>(1e-12) {
        return Err(Error::Domain("square root has vanishing trace".into()));
    }
    InvariantState::certify(s.scale(T::one() / tr))
}
