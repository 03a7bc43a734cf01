//! Seeded random constructions used by the samplers and the certification
//! machinery. All randomness in the crate flows through explicit RNGs so
//! that outputs are reproducible from a seed.

use crate::operator::DenseOperator;
use crate::scalar::{from_f64, Scalar, C};
use nalgebra::{ComplexField, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

/// Complex Ginibre matrix: independent standard-normal real and imaginary
/// parts.
pub fn ginibre<T: Scalar, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C<T>> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C::new(from_f64::<T>(re), from_f64::<T>(im))
    })
}

/// Random hermitian matrix with standard-normal coefficient statistics.
pub fn random_hermitian<T: Scalar, R: Rng>(dim: usize, rng: &mut R) -> DMatrix<C<T>> {
    let g = ginibre::<T, R>(dim, dim, rng);
    let half = from_f64::<T>(0.5);
    (&g + g.adjoint()).map(|x| x * half)
}

/// Haar-like random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<T: Scalar, R: Rng>(dim: usize, rng: &mut R) -> DMatrix<C<T>> {
    let g = ginibre::<T, R>(dim, dim, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix the phase convention so the distribution is Haar
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.modulus() > T::zero() {
            d / C::new(d.modulus(), T::zero())
        } else {
            C::new(T::one(), T::zero())
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random full-rank density operator on (C^M)^⊗N (not yet permutation
/// invariant): GG†/tr[GG†] for Ginibre G.
pub fn random_density<T: Scalar, R: Rng>(
    modes: usize,
    particles: usize,
    rng: &mut R,
) -> crate::error::Result<DenseOperator<T>> {
    let dim = crate::operator::space_dim(modes, particles)?;
    let g = ginibre::<T, R>(dim, dim, rng);
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    let mat = gg.map(|x| x / C::new(tr, T::zero()));
    DenseOperator::from_matrix(modes, particles, mat)
}

/// Random POVM with the given number of outcomes: Ginibre-seeded positive
/// operators G_i normalized by the symmetric rule S^{-1/2} G_i S^{-1/2},
/// S = Σ G_i, so completeness holds to roundoff.
pub fn random_povm<T: Scalar, R: Rng>(
    modes: usize,
    particles: usize,
    outcomes: usize,
    rng: &mut R,
) -> crate::error::Result<Vec<DenseOperator<T>>> {
    let dim = crate::operator::space_dim(modes, particles)?;
    let parts: Vec<DMatrix<C<T>>> = (0..outcomes)
        .map(|_| {
            let g = ginibre::<T, R>(dim, dim, rng);
            &g * g.adjoint()
        })
        .collect();
    let mut total = DMatrix::<C<T>>::zeros(dim, dim);
    for p in &parts {
        total += p;
    }
    let eig = crate::linalg::hermitian_eigen(&total);
    let mut inv_sqrt = DMatrix::<C<T>>::zeros(dim, dim);
    for (i, &v) in eig.values.iter().enumerate() {
        let col = eig.vectors.column(i);
        inv_sqrt += col * col.adjoint() * C::new(T::one() / v.sqrt(), T::zero());
    }
    parts
        .into_iter()
        .map(|p| DenseOperator::from_matrix(modes, particles, &inv_sqrt * p * &inv_sqrt))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn povm_is_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let povm = random_povm::<f64, _>(2, 2, 4, &mut rng).unwrap();
        assert!(crate::measures::validate_povm(&povm).is_ok());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in [2usize, 3, 4] {
            let u = random_unitary::<f64, _>(dim, &mut rng);
            let gram = u.adjoint() * &u;
            assert!((gram - DMatrix::<C<f64>>::identity(dim, dim)).norm() < 1e-12);
        }
    }

    #[test]
    fn density_is_normalized_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density::<f64, _>(2, 2, &mut rng).unwrap();
        assert!((rho.trace_re() - 1.0).abs() < 1e-12);
        let (vals, _) = rho.hermitian_eigen();
        assert!(vals.iter().all(|&v| v > -1e-12));
    }

    #[test]
    fn seeded_reproducibility() {
        let a = random_unitary::<f64, _>(3, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_unitary::<f64, _>(3, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }
}
