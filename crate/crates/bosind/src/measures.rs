//! Indistinguishability quantifiers and the tight p_2 → p_N bounds.
//!
//! The central quantity is p_k = tr[(P_S^(k) ⊗ 1^(N-k)) ρ], the weight of
//! the k-particle symmetric projector. p_N = 1 characterizes perfectly
//! indistinguishable particles; the trace distance between ρ and its
//! indistinguishable part equals 1 - p_N and bounds every measured
//! total-variation distance. The closed-form bounds
//! b ≤ p_N ≤ p_2, b = max(0, p_2(N-1) - (N-2)), are cross-checked against
//! an exact vertex-enumeration solver for the partition-indexed linear
//! program over the spectrum {t_λ} of the transposition mean.

use crate::error::{Error, Result};
use crate::operator::DenseOperator;
use crate::scalar::{from_f64, to_f64, Scalar};
use crate::states::InvariantState;
use crate::symgroup::{partitions, Partition, Rational};
use crate::tensor_rep::{isotypic_projector, symmetric_projector};

/// p_k: expectation of the symmetric projector on the first k particles.
/// Independent of which k particles carry the projector, by invariance.
pub fn p_k<T: Scalar>(rho: &InvariantState<T>, k: usize) -> Result<T> {
    let n = rho.particles();
    if k < 2 || k > n {
        return Err(Error::Domain(format!(
            "p_k needs 2 <= k <= N, got k = {k}, N = {n}"
        )));
    }
    let proj = symmetric_projector::<T>(rho.modes(), k)?;
    let full = if k == n {
        proj
    } else {
        proj.kron(&DenseOperator::identity(rho.modes(), n - k)?)?
    };
    Ok(full.trace_product(rho.operator()).re)
}

/// p_N: the weight on the totally symmetric subspace, the
/// indistinguishability measure.
pub fn p_n<T: Scalar>(rho: &InvariantState<T>) -> Result<T> {
    p_k(rho, rho.particles())
}

/// The indistinguishable part ρ_ind = P_S ρ P_S / p_N together with p_N.
/// Fails when the state has no symmetric support.
pub fn indistinguishable_part<T: Scalar>(
    rho: &InvariantState<T>,
) -> Result<(InvariantState<T>, T)> {
    let ps = symmetric_projector::<T>(rho.modes(), rho.particles())?;
    let sandwiched = ps.mul(rho.operator()).mul(&ps);
    let weight = sandwiched.trace_re();
    if weight <= from_f64::<T>(1e-12) {
        return Err(Error::NoSymmetricSupport {
            p_n: to_f64(weight),
        });
    }
    let part = InvariantState::certify(sandwiched.scale(T::one() / weight))?;
    Ok((part, weight))
}

/// Trace distance D(a, b) = ½ tr|a - b| of two hermitian operators.
pub fn trace_distance<T: Scalar>(a: &DenseOperator<T>, b: &DenseOperator<T>) -> Result<T> {
    if !a.same_space(b) {
        return Err(Error::Shape(format!(
            "trace distance of operators on ({}, {}) and ({}, {})",
            a.modes(),
            a.particles(),
            b.modes(),
            b.particles()
        )));
    }
    let diff = a.sub(b);
    let (vals, _) = diff.hermitian_eigen();
    let half = from_f64::<T>(0.5);
    Ok(vals.iter().fold(T::zero(), |acc, &v| acc + v.abs()) * half)
}

/// Validates a POVM: hermitian positive elements summing to the identity.
pub fn validate_povm<T: Scalar>(povm: &[DenseOperator<T>]) -> Result<()> {
    let first = povm
        .first()
        .ok_or_else(|| Error::Validation("empty measurement".into()))?;
    let mut sum = DenseOperator::zeros(first.modes(), first.particles())?;
    for m in povm {
        if !m.same_space(first) {
            return Err(Error::Shape("POVM elements on mixed spaces".into()));
        }
        if !m.is_hermitian(from_f64::<T>(1e-8)) {
            return Err(Error::Validation("POVM element is not hermitian".into()));
        }
        let (vals, _) = m.hermitian_eigen();
        if let Some(&min) = vals.last() {
            if min < -from_f64::<T>(1e-8) {
                return Err(Error::Validation(format!(
                    "POVM element has negative eigenvalue {min:?}"
                )));
            }
        }
        sum = sum.add(m);
    }
    let id = DenseOperator::identity(first.modes(), first.particles())?;
    if sum.distance(&id) > from_f64::<T>(1e-9) {
        return Err(Error::Validation(
            "POVM elements do not sum to the identity".into(),
        ));
    }
    Ok(())
}

/// Total-variation distance between the outcome distributions of ρ_ind and
/// ρ under a POVM, together with the bound 1 - p_N that it can never
/// exceed. The Helstrom measurement attains the bound.
pub fn tv_vs_bound<T: Scalar>(
    rho: &InvariantState<T>,
    povm: &[DenseOperator<T>],
) -> Result<(T, T)> {
    validate_povm(povm)?;
    let (ind, weight) = indistinguishable_part(rho)?;
    let half = from_f64::<T>(0.5);
    let mut tv = T::zero();
    for m in povm {
        let r = m.trace_product(ind.operator()).re;
        let q = m.trace_product(rho.operator()).re;
        tv += (r - q).abs();
    }
    Ok((tv * half, T::one() - weight))
}

/// The two-outcome Helstrom measurement distinguishing ρ_ind from ρ: the
/// projector onto the positive part of ρ_ind - ρ and its complement.
pub fn helstrom_measurement<T: Scalar>(rho: &InvariantState<T>) -> Result<Vec<DenseOperator<T>>> {
    let (ind, _) = indistinguishable_part(rho)?;
    let delta = ind.operator().sub(rho.operator());
    let (vals, vecs) = delta.hermitian_eigen();
    let mut plus = DenseOperator::zeros(rho.modes(), rho.particles())?;
    for (i, &v) in vals.iter().enumerate() {
        if v > from_f64::<T>(1e-10) {
            let col = vecs.column(i);
            let outer = col * col.adjoint();
            plus.matrix_mut().zip_apply(&outer, |x, y| *x += y);
        }
    }
    let complement = DenseOperator::identity(rho.modes(), rho.particles())?.sub(&plus);
    Ok(vec![plus, complement])
}

/// The closed-form lower bound b of p_N as a function of p_2, exact in
/// rationals: 0 below the breakpoint (N-2)/(N-1), then p_2(N-1) - (N-2).
pub fn bound_b_exact(p2: Rational, n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Domain(format!("bounds need N >= 2, got {n}")));
    }
    if p2 < Rational::new(0, 1) || p2 > Rational::new(1, 1) {
        return Err(Error::Domain(format!("p2 = {p2} outside [0, 1]")));
    }
    let n = n as i128;
    let b = p2 * Rational::new(n - 1, 1) - Rational::new(n - 2, 1);
    Ok(b.max(Rational::new(0, 1)))
}

/// Floating-point rendition of [`bound_b_exact`].
pub fn bound_b<T: Scalar>(p2: T, n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!("bounds need N >= 2, got {n}")));
    }
    if p2 < T::zero() || p2 > T::one() {
        return Err(Error::Domain("p2 outside [0, 1]".into()));
    }
    let nm1 = from_f64::<T>((n - 1) as f64);
    let nm2 = from_f64::<T>((n - 2) as f64);
    Ok((p2 * nm1 - nm2).max(T::zero()))
}

/// Extrema of p_(N) over the polytope
/// { p_λ ≥ 0, Σ p_λ = 1, Σ t_λ p_λ = c }, with partitions restricted to at
/// most M rows. Solved exactly by basic-feasible-solution enumeration:
/// with two equality constraints every vertex has at most two nonzero
/// coordinates, so enumerating singletons and pairs is exhaustive. This is
/// robust to collisions among the t_λ (which exist from N = 6 on).
pub fn lp_extrema(c: Rational, n: usize, m: usize) -> Result<(Rational, Rational)> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "linear program needs N >= 2, got {n}"
        )));
    }
    let lams = partitions(n, m.min(n));
    let ts: Vec<Rational> = lams
        .iter()
        .map(|l| l.transposition_eigenvalue())
        .collect::<Result<_>>()?;
    let sym = Partition::row(n);
    let zero = Rational::new(0, 1);
    let one = Rational::new(1, 1);

    let mut best: Option<(Rational, Rational)> = None;
    let mut consider = |value: Rational| {
        best = Some(match best {
            None => (value, value),
            Some((lo, hi)) => (lo.min(value), hi.max(value)),
        });
    };

    for (i, t) in ts.iter().enumerate() {
        if *t == c {
            consider(if lams[i] == sym { one } else { zero });
        }
    }
    for i in 0..ts.len() {
        for j in (i + 1)..ts.len() {
            if ts[i] == ts[j] {
                continue;
            }
            let pi = (c - ts[j]) / (ts[i] - ts[j]);
            let pj = one - pi;
            if pi < zero || pi > one {
                continue;
            }
            let value = if lams[i] == sym {
                pi
            } else if lams[j] == sym {
                pj
            } else {
                zero
            };
            consider(value);
        }
    }

    best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no invariant state with <= {m} rows has tr[Tρ] = {c} at N = {n}"
        ))
    })
}

/// One row of the bounds table: closed forms and the exact solver, at an
/// exact rational p_2.
#[derive(Debug, Clone)]
pub struct BoundResult {
    pub n: usize,
    pub p2: Rational,
    pub lower_closed: Rational,
    pub upper_closed: Rational,
    pub lower_lp: Rational,
    pub upper_lp: Rational,
}

/// Evaluates both routes with all partitions available (M ≥ N).
pub fn bounds_row(n: usize, p2: Rational) -> Result<BoundResult> {
    let c = Rational::new(2, 1) * p2 - Rational::new(1, 1);
    let (lo, hi) = lp_extrema(c, n, n)?;
    Ok(BoundResult {
        n,
        p2,
        lower_closed: bound_b_exact(p2, n)?,
        upper_closed: p2,
        lower_lp: lo,
        upper_lp: hi,
    })
}

/// The Dicke/antisymmetric mixture α|D_N⟩⟨D_N| + (1-α)|AS_N⟩⟨AS_N| on
/// M = N modes. Has p_N = p_2 = α: it traverses the upper bound, and the
/// member with α = b realizes the lower-bound value b.
pub fn tight_state<T: Scalar>(alpha: T, n: usize) -> Result<InvariantState<T>> {
    if alpha < T::zero() || alpha > T::one() {
        return Err(Error::Domain("mixture weight outside [0, 1]".into()));
    }
    let assignment = crate::operator::ModeAssignment::new((1..=n).collect(), n)?;
    let dicke = crate::states::dicke_state::<T>(&assignment)?;
    let anti = crate::states::antisymmetric_state::<T>(n)?;
    let op = dicke
        .operator()
        .scale(alpha)
        .add(&anti.operator().scale(T::one() - alpha));
    InvariantState::certify(op)
}

/// A state with the given p_2 that attains the lower bound p_N = b(p_2)
/// exactly: mixes the Dicke state with weight b against a state supported
/// on the (N-1, 1) isotypic block (eigenvalue t = (N-3)/(N-1) of the
/// transposition mean), which is the binding direction of the linear
/// program. Below the breakpoint the Dicke weight is zero and the
/// (N-1, 1) block is mixed against the antisymmetric state instead.
pub fn lower_tight_state<T: Scalar>(p2: T, n: usize) -> Result<InvariantState<T>> {
    if n < 3 {
        return Err(Error::Domain(
            "the lower-bound family needs N >= 3; at N = 2 the bounds coincide".into(),
        ));
    }
    if p2 < T::zero() || p2 > T::one() {
        return Err(Error::Domain("p2 outside [0, 1]".into()));
    }
    let assignment = crate::operator::ModeAssignment::new((1..=n).collect(), n)?;
    let block = Partition::new(vec![n - 1, 1])?;
    let proj = isotypic_projector::<T>(&block, n, n)?;
    let mixture = crate::states::classical_mixture::<T>(&assignment)?;
    let sandwiched = proj.mul(mixture.operator()).mul(&proj);
    let sigma = sandwiched.scale(T::one() / sandwiched.trace_re());

    let c = from_f64::<T>(2.0) * p2 - T::one();
    let t = from_f64::<T>((n as f64 - 3.0) / (n as f64 - 1.0));
    let b = bound_b(p2, n)?;
    let op = if c >= t {
        crate::states::dicke_state::<T>(&assignment)?
            .operator()
            .scale(b)
            .add(&sigma.scale(T::one() - b))
    } else {
        let w = (c + T::one()) / (t + T::one());
        let anti = crate::states::antisymmetric_state::<T>(n)?;
        sigma.scale(w).add(&anti.operator().scale(T::one() - w))
    };
    InvariantState::certify(op)
}
