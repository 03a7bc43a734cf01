//! Cross-module invariants on randomized state families, beyond the
//! acceptance criteria.

use bosind::measures::{bound_b, bound_b_exact, bounds_row, p_k, p_n};
use bosind::operator::{DenseOperator, ModeAssignment};
use bosind::states::random_invariant;
use bosind::symgroup::{partitions, Partition, Rational};
use bosind::tensor_rep::{isotypic_projector, schur_weyl_blocks};
use bosind::tomography::{
    design_unitaries, random_observable_basis, reconstruct_state, simulate_records,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn schur_weights_of_reference_states() {
    // Dicke state at N = M = 3: all weight on the symmetric block
    let dicke = bosind::states::dicke_state::<f64>(&ModeAssignment::new(vec![1, 2, 3], 3).unwrap())
        .unwrap();
    assert!((p_n(&dicke).unwrap() - 1.0).abs() < 1e-12);
    let blocks = schur_weyl_blocks(&dicke).unwrap();
    for b in &blocks.blocks {
        let expected = if b.partition == Partition::row(3) {
            1.0
        } else {
            0.0
        };
        assert!((b.weight - expected).abs() < 1e-12, "block {}", b.partition);
    }

    // classical mixture of (1,2,3): the regular representation, weights
    // d_λ²/N! = (1/6, 2/3, 1/6)
    let cm =
        bosind::states::classical_mixture::<f64>(&ModeAssignment::new(vec![1, 2, 3], 3).unwrap())
            .unwrap();
    let blocks = schur_weyl_blocks(&cm).unwrap();
    for b in &blocks.blocks {
        let expected = (b.irrep_dim * b.irrep_dim) as f64 / 6.0;
        assert!((b.weight - expected).abs() < 1e-12, "block {}", b.partition);
    }

    // maximally mixed at M = N = 2: weights by block dimension, 3/4 and 1/4
    let mm = bosind::states::InvariantState::certify(
        DenseOperator::<f64>::identity(2, 2).unwrap().scale(0.25),
    )
    .unwrap();
    let blocks = schur_weyl_blocks(&mm).unwrap();
    for b in &blocks.blocks {
        let expected = if b.partition == Partition::row(2) {
            0.75
        } else {
            0.25
        };
        assert!((b.weight - expected).abs() < 1e-12);
    }
}

#[test]
fn block_structure_on_the_three_particle_orbit() {
    // Invariant states supported on span{π|123⟩} (M = N = 3) decompose
    // into the symmetric line, the antisymmetric line, and two copies of
    // the two-dimensional mixed-symmetry irrep. Checks the explicit
    // structure against a random such state: the symmetric/antisymmetric
    // combinations are eigenvectors carrying the block weights, and the
    // isometry-compressed mixed block is exactly ρ_λ ⊗ 1/2.
    use bosind::scalar::C;
    use bosind::states::InvariantState;
    use bosind::tensor_rep::{isotypic_isometry, permuted_index, twirl};
    use nalgebra::{DMatrix, DVector};

    let mut rng = ChaCha8Rng::seed_from_u64(2008);
    let base = ModeAssignment::new(vec![1, 2, 3], 3).unwrap();
    let group = bosind::symgroup::permutations(3).unwrap();

    // random density on the 6-dimensional orbit span, then twirled
    let orbit: Vec<usize> = group
        .iter()
        .map(|p| permuted_index(p, base.index(), 3))
        .collect();
    let seed = bosind::random::ginibre::<f64, _>(6, 6, &mut rng);
    let small = &seed * seed.adjoint();
    let small = &small / small.trace();
    let mut op = DenseOperator::<f64>::zeros(3, 3).unwrap();
    for (r, &ir) in orbit.iter().enumerate() {
        for (c, &ic) in orbit.iter().enumerate() {
            op.matrix_mut()[(ir, ic)] = small[(r, c)];
        }
    }
    let rho = InvariantState::certify(twirl(&op).unwrap()).unwrap();
    let blocks = schur_weyl_blocks(&rho).unwrap();

    // symmetric and antisymmetric combinations of the orbit vectors
    let mut sym = DVector::<C<f64>>::zeros(27);
    let mut anti = DVector::<C<f64>>::zeros(27);
    for (p, &idx) in group.iter().zip(&orbit) {
        sym[idx] += C::new(1.0, 0.0);
        anti[idx] += C::new(p.sign() as f64, 0.0);
    }
    sym /= C::new(sym.norm(), 0.0);
    anti /= C::new(anti.norm(), 0.0);

    let weight_of = |parts: &[usize]| {
        blocks
            .blocks
            .iter()
            .find(|b| b.partition.parts() == parts)
            .map(|b| b.weight)
            .unwrap()
    };
    let sym_val = (sym.adjoint() * rho.operator().matrix() * &sym)[(0, 0)].re;
    assert!((sym_val - weight_of(&[3])).abs() < 1e-10);
    let anti_val = (anti.adjoint() * rho.operator().matrix() * &anti)[(0, 0)].re;
    assert!((anti_val - weight_of(&[1, 1, 1])).abs() < 1e-10);
    // both are eigenvectors of the state
    let moved = rho.operator().matrix() * &sym - &sym * C::new(sym_val, 0.0);
    assert!(moved.norm() < 1e-10);
    let moved = rho.operator().matrix() * &anti - &anti * C::new(anti_val, 0.0);
    assert!(moved.norm() < 1e-10);

    // mixed-symmetry block: compressed state is ρ_λ ⊗ 1/d exactly
    let lam = Partition::new(vec![2, 1]).unwrap();
    let iso = isotypic_isometry::<f64>(&lam, 3, 3).unwrap();
    let compressed = iso.matrix.adjoint() * rho.operator().matrix() * &iso.matrix;
    let block = blocks
        .blocks
        .iter()
        .find(|b| b.partition == lam)
        .unwrap();
    let m = iso.multiplicity;
    let d = iso.irrep_dim;
    let mut expected = DMatrix::<C<f64>>::zeros(m * d, m * d);
    for a in 0..m {
        for b in 0..m {
            for j in 0..d {
                expected[(a * d + j, b * d + j)] =
                    block.rho[(a, b)] * C::new(block.weight / d as f64, 0.0);
            }
        }
    }
    assert!((compressed - expected).norm() < 1e-10);
}

#[test]
fn symmetric_weight_equals_p_n_across_shapes() {
    // two independent computations of the same quantity, including the
    // largest desk-scale shape
    let mut rng = ChaCha8Rng::seed_from_u64(2006);
    let shapes = [
        (2usize, 2usize, 8usize),
        (2, 3, 8),
        (3, 2, 8),
        (3, 3, 8),
        (2, 4, 6),
        (4, 2, 6),
        (3, 4, 3),
        (4, 3, 3),
        (4, 4, 2),
    ];
    for (m, n, count) in shapes {
        for _ in 0..count {
            let rho = random_invariant::<f64, _>(m, n, &mut rng).unwrap();
            let blocks = schur_weyl_blocks(&rho).unwrap();
            assert!((blocks.symmetric_weight() - p_n(&rho).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn evolution_preserves_p_n_on_fifty_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2007);
    for _ in 0..50 {
        let rho = random_invariant::<f64, _>(2, 3, &mut rng).unwrap();
        let u = bosind::random::random_unitary::<f64, _>(2, &mut rng);
        let evolved = bosind::interferometer::evolve(&rho, &u).unwrap();
        assert!((p_n(&evolved).unwrap() - p_n(&rho).unwrap()).abs() < 1e-10);
        assert!((evolved.operator().trace_re() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn constructors_are_invariant_at_tight_tolerance() {
    use bosind::states::is_invariant;
    let checks: Vec<bosind::states::InvariantState<f64>> = vec![
        bosind::states::dicke_state(&ModeAssignment::new(vec![1, 2], 2).unwrap()).unwrap(),
        bosind::states::dicke_state(&ModeAssignment::new(vec![1, 1, 2], 2).unwrap()).unwrap(),
        bosind::states::antisymmetric_state(3).unwrap(),
        bosind::states::classical_mixture(&ModeAssignment::new(vec![1, 2, 3], 3).unwrap()).unwrap(),
        bosind::states::permutation_traceless_state().unwrap(),
        bosind::measures::tight_state(0.4, 3).unwrap(),
        bosind::measures::lower_tight_state(0.9, 3).unwrap(),
    ];
    for state in &checks {
        assert!(is_invariant(state.operator(), 1e-10));
    }
}

#[test]
fn no_coherence_between_isotypic_blocks() {
    // Schur's lemma: P_λ ρ P_μ = 0 for λ ≠ μ on invariant ρ
    let mut rng = ChaCha8Rng::seed_from_u64(2001);
    for (m, n) in [(2usize, 3usize), (3, 3), (2, 4)] {
        let projs: Vec<DenseOperator<f64>> = partitions(n, m.min(n))
            .iter()
            .map(|l| isotypic_projector::<f64>(l, m, n).unwrap())
            .collect();
        for _ in 0..10 {
            let rho = random_invariant::<f64, _>(m, n, &mut rng).unwrap();
            for (i, pa) in projs.iter().enumerate() {
                for (j, pb) in projs.iter().enumerate() {
                    if i != j {
                        let cross = pa.mul(rho.operator()).mul(pb);
                        assert!(cross.frobenius_norm() < 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn bounds_hold_on_two_hundred_states_per_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    for m in 2..=4usize {
        for n in 2..=4usize {
            for _ in 0..200 {
                let rho = random_invariant::<f64, _>(m, n, &mut rng).unwrap();
                let p2 = p_k(&rho, 2).unwrap();
                let pn = p_n(&rho).unwrap();
                let b = bound_b(p2, n).unwrap();
                assert!(
                    b - 1e-9 <= pn && pn <= p2 + 1e-9,
                    "({m},{n}): b={b} pn={pn} p2={p2}"
                );
            }
        }
    }
}

#[test]
fn monotone_projector_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(2003);
    for _ in 0..20 {
        let rho = random_invariant::<f64, _>(2, 4, &mut rng).unwrap();
        let chain: Vec<f64> = (2..=4).map(|k| p_k(&rho, k).unwrap()).collect();
        for w in chain.windows(2) {
            assert!(w[1] <= w[0] + 1e-11);
        }
    }
}

#[test]
fn lp_matches_closed_form_for_all_small_n() {
    for n in 2..=10usize {
        for k in 0..=100i128 {
            let p2 = Rational::new(k, 100);
            let row = bounds_row(n, p2).unwrap();
            assert_eq!(row.lower_lp, row.lower_closed);
            assert_eq!(row.upper_lp, row.upper_closed);
            // rational exactness of the closed form at the breakpoint
            let bp = Rational::new(n as i128 - 2, n as i128 - 1);
            assert_eq!(bound_b_exact(bp, n).unwrap(), Rational::new(0, 1));
        }
    }
}

#[test]
fn reconstruction_is_a_fixed_point_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(2004);
    for n in [2usize, 3] {
        let obs = random_observable_basis::<f64, _>(2, n, &mut rng).unwrap();
        let settings = design_unitaries(&obs);
        for _ in 0..10 {
            let rho = random_invariant::<f64, _>(2, n, &mut rng).unwrap();
            let records = simulate_records(&rho, &settings).unwrap();
            let (rec, _) = reconstruct_state(&records, 2, n).unwrap();
            assert!(rec.operator().distance(rho.operator()) < 1e-6);
        }
    }
}

#[test]
fn different_states_are_distinguished_by_some_setting() {
    // tomographic completeness, operationally: states at Frobenius
    // distance > 1e-3 differ in at least one recorded distribution
    let mut rng = ChaCha8Rng::seed_from_u64(2005);
    let obs = random_observable_basis::<f64, _>(2, 3, &mut rng).unwrap();
    let settings = design_unitaries(&obs);
    for _ in 0..10 {
        let a = random_invariant::<f64, _>(2, 3, &mut rng).unwrap();
        let b = random_invariant::<f64, _>(2, 3, &mut rng).unwrap();
        if a.operator().distance(b.operator()) <= 1e-3 {
            continue;
        }
        let ra = simulate_records(&a, &settings).unwrap();
        let rb = simulate_records(&b, &settings).unwrap();
        let max_tv = ra
            .iter()
            .zip(&rb)
            .map(|(x, y)| x.distribution.tv_distance(&y.distribution))
            .fold(0.0f64, f64::max);
        assert!(max_tv > 1e-6, "states not separated: max TV {max_tv}");
    }
}
