//! Passive linear interferometers and particle number detection.
//!
//! Evolution is U^⊗N on the external state (first quantization); detection
//! of a mode occupation m is the projector onto all mode assignment
//! vectors with that occupation. A permanent-based second-quantization
//! oracle cross-validates the simulated distributions.

use crate::error::{Error, Result};
use crate::operator::{space_dim, DenseOperator, ModeAssignment};
use crate::scalar::{c_re, from_f64, Scalar, C};
use crate::states::InvariantState;
use crate::tensor_rep::tensor_power;
use nalgebra::DMatrix;

/// A mode occupation: counts of particles per mode, Σ m_j = N.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeOccupation {
    counts: Vec<usize>,
}

impl ModeOccupation {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Validation("empty occupation".into()));
        }
        Ok(ModeOccupation { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn modes(&self) -> usize {
        self.counts.len()
    }

    pub fn particles(&self) -> usize {
        self.counts.iter().sum()
    }

    /// The weakly increasing mode assignment with this occupation,
    /// e.g. (1, 2, 0) → |122⟩.
    pub fn canonical_assignment(&self) -> Result<ModeAssignment> {
        let mut entries = Vec::with_capacity(self.particles());
        for (j, &c) in self.counts.iter().enumerate() {
            entries.extend(std::iter::repeat_n(j + 1, c));
        }
        ModeAssignment::new(entries, self.modes())
    }

    /// Occupation of a mode assignment.
    pub fn of_assignment(assignment: &ModeAssignment) -> Self {
        let mut counts = vec![0usize; assignment.modes()];
        for &l in assignment.entries() {
            counts[l - 1] += 1;
        }
        ModeOccupation { counts }
    }

    /// Number of mode assignments with this occupation, N!/∏ m_j!.
    pub fn orbit_size(&self) -> usize {
        let mut num: u128 = 1;
        for k in 2..=self.particles() {
            num *= k as u128;
        }
        let mut den: u128 = 1;
        for &c in &self.counts {
            for k in 2..=c {
                den *= k as u128;
            }
        }
        (num / den) as usize
    }
}

impl std::fmt::Display for ModeOccupation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All occupations of N particles in M modes, in colexicographic order
/// (compare from the last mode). This order is normative for distribution
/// tables.
pub fn occupations(modes: usize, particles: usize) -> Vec<ModeOccupation> {
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; modes];
    compose(particles, 0, modes, &mut current, &mut all);
    all.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    all.into_iter()
        .map(|counts| ModeOccupation { counts })
        .collect()
}

fn compose(
    remaining: usize,
    mode: usize,
    modes: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if mode == modes - 1 {
        current[mode] = remaining;
        out.push(current.clone());
        current[mode] = 0;
        return;
    }
    for c in 0..=remaining {
        current[mode] = c;
        compose(remaining - c, mode + 1, modes, current, out);
        current[mode] = 0;
    }
}

/// Checks unitarity of an M × M matrix to the given tolerance.
pub fn validate_unitary<T: Scalar>(u: &DMatrix<C<T>>, tol: T) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::Validation(
            "interferometer matrix must be square".into(),
        ));
    }
    let gram = u.adjoint() * u;
    let id = DMatrix::<C<T>>::identity(u.nrows(), u.ncols());
    if (gram - id).norm() > tol {
        return Err(Error::Validation("matrix is not unitary".into()));
    }
    Ok(())
}

/// ρ ↦ U^⊗N ρ (U†)^⊗N. Preserves invariance, trace and every p_k.
pub fn evolve<T: Scalar>(rho: &InvariantState<T>, u: &DMatrix<C<T>>) -> Result<InvariantState<T>> {
    validate_unitary(u, from_f64::<T>(1e-10))?;
    if u.nrows() != rho.modes() {
        return Err(Error::Shape(format!(
            "interferometer on {} modes applied to a {}-mode state",
            u.nrows(),
            rho.modes()
        )));
    }
    let un = tensor_power(u, rho.particles())?;
    let evolved = un.mul(rho.operator()).mul(&un.adjoint());
    InvariantState::certify_with(evolved, rho.tolerance())
}

/// The detection operator E(m): the projector onto the span of all mode
/// assignment vectors with occupation m (the permutation orbit of the
/// canonical assignment). Diagonal, with rank N!/∏ m_j!, and complete:
/// Σ_m E(m) = 1.
pub fn measurement_operator<T: Scalar>(
    m: &ModeOccupation,
    particles: usize,
) -> Result<DenseOperator<T>> {
    if m.particles() != particles {
        return Err(Error::Validation(format!(
            "occupation {m} does not hold {particles} particles"
        )));
    }
    let modes = m.modes();
    let dim = space_dim(modes, particles)?;
    let mut op = DenseOperator::zeros(modes, particles)?;
    for idx in 0..dim {
        let assignment = ModeAssignment::from_index(idx, modes, particles);
        if ModeOccupation::of_assignment(&assignment) == *m {
            op.matrix_mut()[(idx, idx)] = c_re(T::one());
        }
    }
    Ok(op)
}

/// Distribution over mode occupations, stored in colexicographic order.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution<T: Scalar> {
    entries: Vec<(ModeOccupation, T)>,
}

impl<T: Scalar> OutcomeDistribution<T> {
    /// Assembles a distribution from (occupation, probability) pairs,
    /// normalizing the storage order to colexicographic and filling
    /// unlisted occupations with zero. Probabilities must be nonnegative
    /// and sum to 1 within 1e-9.
    pub fn from_entries(
        entries: Vec<(ModeOccupation, T)>,
        modes: usize,
        particles: usize,
    ) -> Result<Self> {
        let occs = occupations(modes, particles);
        let mut probs = vec![T::zero(); occs.len()];
        for (occ, p) in entries {
            if occ.particles() != particles || occ.modes() != modes {
                return Err(Error::Validation(format!(
                    "occupation {occ} does not describe {particles} particles in {modes} modes"
                )));
            }
            if p < -from_f64::<T>(1e-12) {
                return Err(Error::Validation(format!("negative probability at {occ}")));
            }
            let idx = occs
                .iter()
                .position(|o| *o == occ)
                .expect("enumeration is complete");
            probs[idx] += p;
        }
        let total = probs.iter().fold(T::zero(), |acc, &p| acc + p);
        if (total - T::one()).abs() > from_f64::<T>(1e-9) {
            return Err(Error::Validation(format!(
                "distribution sums to {:?}, expected 1",
                total
            )));
        }
        Ok(OutcomeDistribution {
            entries: occs.into_iter().zip(probs).collect(),
        })
    }

    pub fn entries(&self) -> &[(ModeOccupation, T)] {
        &self.entries
    }

    pub fn probability(&self, m: &ModeOccupation) -> T {
        self.entries
            .iter()
            .find(|(occ, _)| occ == m)
            .map(|(_, p)| *p)
            .unwrap_or_else(T::zero)
    }

    pub fn total(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, (_, p)| acc + *p)
    }

    /// Largest absolute probability difference... the total-variation
    /// distance to another distribution on the same outcome set.
    pub fn tv_distance(&self, other: &OutcomeDistribution<T>) -> T {
        let half = from_f64::<T>(0.5);
        self.entries
            .iter()
            .zip(other.entries.iter())
            .fold(T::zero(), |acc, ((_, p), (_, q))| acc + (*p - *q).abs())
            * half
    }
}

/// Outcome distribution of evolving ρ through U and counting particles:
/// prob(m) = tr[E(m) U^⊗N ρ (U†)^⊗N].
pub fn outcome_distribution<T: Scalar>(
    rho: &InvariantState<T>,
    u: &DMatrix<C<T>>,
) -> Result<OutcomeDistribution<T>> {
    let evolved = evolve(rho, u)?;
    distribution_of_state(&evolved)
}

/// Particle-number distribution of a state without further evolution:
/// aggregates the computational-basis diagonal by occupation.
pub fn distribution_of_state<T: Scalar>(rho: &InvariantState<T>) -> Result<OutcomeDistribution<T>> {
    let modes = rho.modes();
    let particles = rho.particles();
    let occs = occupations(modes, particles);
    let index_of: std::collections::HashMap<&ModeOccupation, usize> =
        occs.iter().zip(0..).collect();
    let mut probs = vec![T::zero(); occs.len()];
    for idx in 0..rho.operator().dim() {
        let assignment = ModeAssignment::from_index(idx, modes, particles);
        let occ = ModeOccupation::of_assignment(&assignment);
        probs[index_of[&occ]] += rho.operator().matrix()[(idx, idx)].re;
    }
    Ok(OutcomeDistribution {
        entries: occs.into_iter().zip(probs).collect(),
    })
}

/// Permanent by Ryser's formula with Gray-code subset updates; exact
/// O(2^n n) for the n ≤ 5 matrices used by the oracle.
pub fn permanent<T: Scalar>(a: &DMatrix<C<T>>) -> C<T> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "permanent of a square matrix");
    if n == 0 {
        return c_re(T::one());
    }
    let mut row_sums = vec![C::new(T::zero(), T::zero()); n];
    let mut total = C::new(T::zero(), T::zero());
    let mut gray = 0usize;
    let mut sign = T::one();
    for k in 1usize..(1 << n) {
        let next = k ^ (k >> 1);
        let changed = next ^ gray;
        let j = changed.trailing_zeros() as usize;
        if next & changed != 0 {
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs += a[(i, j)];
            }
        } else {
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs -= a[(i, j)];
            }
        }
        gray = next;
        sign = -sign;
        let mut prod = c_re(T::one());
        for rs in &row_sums {
            prod *= *rs;
        }
        total += prod * c_re(sign);
    }
    let parity = if n.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    };
    total * c_re(parity)
}

/// Second-quantization transition probability |m_in⟩ → m_out through U:
/// |Per(U[m_out; m_in])|² / (∏ m_in! ∏ m_out!), where the submatrix
/// repeats row i m_out(i) times and column j m_in(j) times. Matches the
/// first-quantization distribution of the Dicke state of m_in.
pub fn permanent_oracle<T: Scalar>(
    u: &DMatrix<C<T>>,
    m_in: &ModeOccupation,
    m_out: &ModeOccupation,
) -> Result<T> {
    let n = m_in.particles();
    if m_out.particles() != n {
        return Err(Error::Validation(format!(
            "occupations {m_in} and {m_out} hold different particle numbers"
        )));
    }
    if n > 5 {
        return Err(Error::Size(format!(
            "permanent oracle guarded at N <= 5, got {n}"
        )));
    }
    if m_in.modes() != u.nrows() || m_out.modes() != u.nrows() {
        return Err(Error::Shape(
            "occupation length does not match the unitary".into(),
        ));
    }
    validate_unitary(u, from_f64::<T>(1e-10))?;
    let rows: Vec<usize> = m_out
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(i, c))
        .collect();
    let cols: Vec<usize> = m_in
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(j, &c)| std::iter::repeat_n(j, c))
        .collect();
    let sub = DMatrix::from_fn(n, n, |r, c| u[(rows[r], cols[c])]);
    let per = permanent(&sub);
    let mut norm = 1.0f64;
    for &c in m_in.counts().iter().chain(m_out.counts()) {
        for k in 2..=c {
            norm *= k as f64;
        }
    }
    Ok(per.norm_sqr() / from_f64::<T>(norm))
}

/// The balanced beamsplitter [[1, 1], [1, -1]]/√2. The HOM dip refers to
/// this phase convention.
pub fn beamsplitter<T: Scalar>() -> DMatrix<C<T>> {
    let s = from_f64::<T>(std::f64::consts::FRAC_1_SQRT_2);
    DMatrix::from_row_slice(2, 2, &[c_re(s), c_re(s), c_re(s), c_re(-s)])
}

/// The M-mode discrete Fourier interferometer U_jk = ω^(jk)/√M.
pub fn fourier_interferometer<T: Scalar>(modes: usize) -> DMatrix<C<T>> {
    let scale = from_f64::<T>(1.0 / (modes as f64).sqrt());
    DMatrix::from_fn(modes, modes, |j, k| {
        let angle = from_f64::<T>(2.0 * std::f64::consts::PI * (j * k) as f64 / modes as f64);
        C::new(angle.cos() * scale, angle.sin() * scale)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::p_n;
    use crate::random::random_unitary;
    use crate::states::{classical_mixture, dicke_state, random_invariant};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn occupation_enumeration_is_colex_and_complete() {
        let occs = occupations(2, 2);
        let counts: Vec<_> = occs.iter().map(|o| o.counts().to_vec()).collect();
        assert_eq!(counts, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        // C(N + M - 1, N) occupations
        assert_eq!(occupations(3, 3).len(), 10);
        assert_eq!(occupations(4, 2).len(), 10);
    }

    #[test]
    fn measurement_operators_are_complete() {
        for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 4)] {
            let mut sum = DenseOperator::<f64>::zeros(m, n).unwrap();
            for occ in occupations(m, n) {
                let e = measurement_operator::<f64>(&occ, n).unwrap();
                assert!(e.is_projector(1e-12));
                assert_eq!(e.rank(1e-9), occ.orbit_size());
                sum = sum.add(&e);
            }
            let id = DenseOperator::identity(m, n).unwrap();
            assert!(sum.distance(&id) < 1e-12, "completeness at ({m},{n})");
        }
        assert!(measurement_operator::<f64>(&ModeOccupation::new(vec![1, 0]).unwrap(), 2).is_err());
    }

    #[test]
    fn evolve_preserves_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let rho = random_invariant::<f64, _>(2, 3, &mut rng).unwrap();
        let id = DMatrix::<C<f64>>::identity(2, 2);
        assert!(
            evolve(&rho, &id)
                .unwrap()
                .operator()
                .distance(rho.operator())
                < 1e-12
        );

        for _ in 0..5 {
            let u = random_unitary::<f64, _>(2, &mut rng);
            let evolved = evolve(&rho, &u).unwrap();
            assert!((p_n(&evolved).unwrap() - p_n(&rho).unwrap()).abs() < 1e-10);
        }
        // non-unitary input rejected
        let bad = DMatrix::<C<f64>>::identity(2, 2) * C::new(0.5, 0.0);
        assert!(evolve(&rho, &bad).is_err());
    }

    #[test]
    fn hom_dip() {
        let l = ModeAssignment::new(vec![1, 2], 2).unwrap();
        let rho = dicke_state::<f64>(&l).unwrap();
        let dist = outcome_distribution(&rho, &beamsplitter::<f64>()).unwrap();
        let coincidence = dist.probability(&ModeOccupation::new(vec![1, 1]).unwrap());
        assert!(coincidence.abs() < 1e-14);
        assert!((dist.probability(&ModeOccupation::new(vec![2, 0]).unwrap()) - 0.5).abs() < 1e-12);
        assert!((dist.probability(&ModeOccupation::new(vec![0, 2]).unwrap()) - 0.5).abs() < 1e-12);

        // distinguishable pair: coincidence 1/2
        let cm = classical_mixture::<f64>(&l).unwrap();
        let dist = outcome_distribution(&cm, &beamsplitter::<f64>()).unwrap();
        assert!((dist.probability(&ModeOccupation::new(vec![1, 1]).unwrap()) - 0.5).abs() < 1e-12);

        // no interferometer: the pair stays put
        let id = DMatrix::<C<f64>>::identity(2, 2);
        let dist = outcome_distribution(&cm, &id).unwrap();
        assert!((dist.probability(&ModeOccupation::new(vec![1, 1]).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn permanent_small_cases() {
        // permanent of [[1,1],[1,-1]]/√2 vanishes
        let bs = beamsplitter::<f64>();
        assert!(permanent(&bs).norm() < 1e-15);
        // 1x1: the entry itself
        let one = DMatrix::from_row_slice(1, 1, &[C::new(0.3, 0.4)]);
        assert!((permanent(&one) - C::new(0.3, 0.4)).norm() < 1e-15);
        // permanent of all-ones 3x3 = 3! = 6
        let ones = DMatrix::from_element(3, 3, C::new(1.0f64, 0.0));
        assert!((permanent(&ones).re - 6.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_matches_single_particle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let u = random_unitary::<f64, _>(3, &mut rng);
        for j in 0..3 {
            let mut m_in = vec![0; 3];
            m_in[j] = 1;
            for i in 0..3 {
                let mut m_out = vec![0; 3];
                m_out[i] = 1;
                let p = permanent_oracle(
                    &u,
                    &ModeOccupation::new(m_in.clone()).unwrap(),
                    &ModeOccupation::new(m_out).unwrap(),
                )
                .unwrap();
                assert!((p - u[(i, j)].norm_sqr()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn oracle_hom_and_normalization() {
        let bs = beamsplitter::<f64>();
        let m11 = ModeOccupation::new(vec![1, 1]).unwrap();
        assert!(permanent_oracle(&bs, &m11, &m11).unwrap() < 1e-15);

        // full distribution sums to 1 for the 3-mode Fourier interferometer
        let f = fourier_interferometer::<f64>(3);
        let m_in = ModeOccupation::new(vec![1, 1, 1]).unwrap();
        let total: f64 = occupations(3, 3)
            .iter()
            .map(|m_out| permanent_oracle(&f, &m_in, m_out).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-11);
    }

    #[test]
    fn oracle_equals_first_quantization() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for (m, n) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
            for _ in 0..3 {
                let u = random_unitary::<f64, _>(m, &mut rng);
                for m_in in occupations(m, n) {
                    let rho = dicke_state::<f64>(&m_in.canonical_assignment().unwrap()).unwrap();
                    let dist = outcome_distribution(&rho, &u).unwrap();
                    for m_out in occupations(m, n) {
                        let direct = dist.probability(&m_out);
                        let oracle = permanent_oracle(&u, &m_in, &m_out).unwrap();
                        assert!(
                            (direct - oracle).abs() < 1e-11,
                            "({m},{n}) {m_in} -> {m_out}: {direct} vs {oracle}"
                        );
                    }
                }
            }
        }
    }
}
