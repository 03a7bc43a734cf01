//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its tolerance once every assertion inside has held.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use bosind::distinguishability::{
    canonical_diagonal, canonical_form, is_perfectly_distinguishable,
};
use bosind::interferometer::{
    beamsplitter, measurement_operator, occupations, outcome_distribution, permanent_oracle,
    ModeOccupation,
};
use bosind::measures::{
    bound_b_exact, bounds_row, helstrom_measurement, indistinguishable_part, lower_tight_state,
    p_k, p_n, tight_state, trace_distance, tv_vs_bound,
};
use bosind::operator::{DenseOperator, ModeAssignment};
use bosind::random::{random_povm, random_unitary};
use bosind::scalar::C;
use bosind::states::{
    classical_mixture, dicke_state, permutation_traceless_state, random_invariant,
    symmetric_purification, InvariantState,
};
use bosind::symgroup::{partitions, permutations, Permutation, Rational};
use bosind::tensor_rep::{perm_operator, schur_weyl_blocks, tensor_power};
use bosind::tomography::{
    design_unitaries, invariant_dimension, p2_from_expansion, random_observable_basis,
    reconstruct_state, simulate_records,
};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type C64 = C<f64>;

fn rotation(theta: f64) -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(theta.cos(), 0.0),
            C64::new(-theta.sin(), 0.0),
            C64::new(theta.sin(), 0.0),
            C64::new(theta.cos(), 0.0),
        ],
    )
}

fn conjugate(state: &InvariantState<f64>, u: &DMatrix<C64>) -> InvariantState<f64> {
    let un = tensor_power(u, state.particles()).unwrap();
    InvariantState::certify(un.mul(state.operator()).mul(&un.adjoint())).unwrap()
}

#[test]
fn criterion_1_bounds_match_linear_program() {
    let start = std::time::Instant::now();
    for n in [2usize, 3, 4, 6, 10] {
        for k in 0..=100i128 {
            let p2 = Rational::new(k, 100);
            let row = bounds_row(n, p2).expect("grid point is feasible for M >= N");
            assert_eq!(
                row.lower_lp, row.lower_closed,
                "lower bound at N={n}, p2={p2}"
            );
            assert_eq!(
                row.upper_lp, row.upper_closed,
                "upper bound at N={n}, p2={p2}"
            );
        }
        // breakpoint exact in rationals
        let bp = Rational::new(n as i128 - 2, n as i128 - 1);
        assert_eq!(bound_b_exact(bp, n).unwrap(), Rational::new(0, 1));
        let above = bp + Rational::new(1, 1_000_000);
        assert!(bound_b_exact(above, n).unwrap() > Rational::new(0, 1));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "bound table took {elapsed:?}");
    println!(
        "acceptance criterion 1 (closed-form bounds = LP oracle, N in {{2,3,4,6,10}}, 101-point grid, exact; {:.2?}): PASS",
        elapsed
    );
}

#[test]
fn criterion_2_tightness_families() {
    for n in [3usize, 4] {
        let breakpoint = (n as f64 - 2.0) / (n as f64 - 1.0);
        for frac in [0.1f64, 0.45, 0.8] {
            let p2 = breakpoint + frac * (1.0 - breakpoint);
            // upper bound: the Dicke/antisymmetric mixture at α = p2 sits on
            // p_N = p_2 = p2
            let upper = tight_state::<f64>(p2, n).unwrap();
            assert!((p_k(&upper, 2).unwrap() - p2).abs() < 1e-9);
            assert!((p_n(&upper).unwrap() - p2).abs() < 1e-9);

            // the member at α = b realizes the lower-bound value
            let b = p2 * (n as f64 - 1.0) - (n as f64 - 2.0);
            let at_bound = tight_state::<f64>(b, n).unwrap();
            assert!((p_n(&at_bound).unwrap() - b).abs() < 1e-9);

            // full saturation at the stated p2: the (N-1,1)-block mixture
            // has exactly (p_2, p_N) = (p2, b)
            let lower = lower_tight_state::<f64>(p2, n).unwrap();
            assert!((p_k(&lower, 2).unwrap() - p2).abs() < 1e-9);
            assert!((p_n(&lower).unwrap() - b).abs() < 1e-9);
        }
    }
    println!("acceptance criterion 2 (tightness families saturate both bounds, N = 3, 4, tol 1e-9): PASS");
}

#[test]
fn criterion_3_trace_distance_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut states = Vec::new();
    for _ in 0..15 {
        states.push(random_invariant::<f64, _>(2, 2, &mut rng).unwrap());
    }
    for _ in 0..15 {
        states.push(random_invariant::<f64, _>(2, 3, &mut rng).unwrap());
    }
    for rho in &states {
        let (ind, weight) = indistinguishable_part(rho).unwrap();
        // the footnote identity D(ρ_ind, ρ) = 1 - p_N
        let d = trace_distance(ind.operator(), rho.operator()).unwrap();
        assert!((d - (1.0 - weight)).abs() < 1e-9);

        for outcomes in [2usize, 3, 4] {
            for _ in 0..(10 / 3 + 1) {
                let povm = random_povm::<f64, _>(rho.modes(), rho.particles(), outcomes, &mut rng)
                    .unwrap();
                let (tv, bound) = tv_vs_bound(rho, &povm).unwrap();
                assert!(tv <= bound + 1e-9, "tv {tv} above bound {bound}");
            }
        }
        let helstrom = helstrom_measurement(rho).unwrap();
        let (tv, bound) = tv_vs_bound(rho, &helstrom).unwrap();
        assert!((tv - bound).abs() < 1e-8, "Helstrom gap {}", tv - bound);
    }
    println!("acceptance criterion 3 (TV <= 1 - p_N for 30 states x >=10 POVMs, Helstrom saturates to 1e-8): PASS");
}

#[test]
fn criterion_4_distinguishability_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);

    // classical mixtures and their tensor-unitary conjugates are certified
    for (m, n) in [(2usize, 2usize), (3, 3)] {
        let cm =
            classical_mixture::<f64>(&ModeAssignment::new((1..=n).collect(), m).unwrap()).unwrap();
        assert!(
            is_perfectly_distinguishable(&cm, 1e-8)
                .unwrap()
                .distinguishable
        );
        let u = random_unitary::<f64, _>(m, &mut rng);
        let moved = conjugate(&cm, &u);
        assert!(
            is_perfectly_distinguishable(&moved, 1e-8)
                .unwrap()
                .distinguishable
        );
    }

    // canonical form round-trips a randomly rotated distinguishable state
    let cm = classical_mixture::<f64>(&ModeAssignment::new(vec![1, 2], 2).unwrap()).unwrap();
    let rotated = conjugate(&cm, &rotation(0.83));
    let form = canonical_form(&rotated, &mut rng).unwrap();
    let moved = form
        .unitary
        .mul(rotated.operator())
        .mul(&form.unitary.adjoint());
    let expected = canonical_diagonal(&[(0.5f64, form.assignments[0].clone())]).unwrap();
    assert!(moved.distance(&expected) < 1e-7);
    for p in permutations(2).unwrap() {
        assert!(form.unitary.commutator_norm(&perm_operator(&p, 2).unwrap()) < 1e-8);
    }

    // non-convexity: the mixture of two non-orthogonal certified states is
    // not certified, yet keeps the symmetric weight at 1/N!
    let tau = InvariantState::certify(cm.operator().scale(0.5).add(&rotated.operator().scale(0.5)))
        .unwrap();
    let cert = is_perfectly_distinguishable(&tau, 1e-8).unwrap();
    assert!(!cert.distinguishable);
    assert!((cert.symmetric_weight - 0.5).abs() < 1e-9);

    println!("acceptance criterion 4 (certificates, canonical-form round trip < 1e-7, non-convexity witness): PASS");
}

#[test]
fn criterion_5_traceless_counterexample() {
    let rho = permutation_traceless_state::<f64>().unwrap();
    // documented orbit-basis ordering: lexicographic arrangements
    // |123⟩, |132⟩, |213⟩, |231⟩, |312⟩, |321⟩
    for p in permutations(3).unwrap() {
        let d = perm_operator::<f64>(&p, 3).unwrap();
        let t = d.trace_product(rho.operator());
        if p.is_identity() {
            assert!((t.re - 1.0).abs() < 1e-12);
        } else {
            assert!(t.norm() < 1e-12, "tr[ρ D({p})] = {t}");
        }
    }
    // a valid invariant state (certified by construction), yet not
    // perfectly distinguishable
    let cert = is_perfectly_distinguishable(&rho, 1e-8).unwrap();
    assert!(!cert.distinguishable);
    println!("acceptance criterion 5 (vanishing-trace state: tr[ρπ] = 0 to 1e-12, certified NOT distinguishable): PASS");
}

#[test]
fn criterion_6_schur_weyl_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    for (m, n) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
        for _ in 0..50 {
            let rho = random_invariant::<f64, _>(m, n, &mut rng).unwrap();
            let blocks = schur_weyl_blocks(&rho).unwrap();
            assert!((blocks.total_weight() - 1.0).abs() < 1e-10);
            let reassembled = blocks.reassemble().unwrap();
            assert!(reassembled.distance(rho.operator()) < 1e-8);
            let pn = p_n(&rho).unwrap();
            assert!((blocks.symmetric_weight() - pn).abs() < 1e-10);
            for b in &blocks.blocks {
                if b.weight > 1e-12 {
                    // each multiplicity-space block is a density matrix
                    assert!((b.rho.trace().re - 1.0).abs() < 1e-9);
                    let eig = b.rho.clone().symmetric_eigen();
                    assert!(eig.eigenvalues.iter().all(|&v| v > -1e-9));
                }
            }
        }
    }
    for n in 1..=6usize {
        let total: usize = partitions(n, n)
            .iter()
            .map(|l| l.hook_dimension().pow(2))
            .sum();
        let fact: usize = (1..=n).product();
        assert_eq!(total, fact);
    }
    println!("acceptance criterion 6 (Schur-Weyl blocks: weights, reassembly < 1e-8, p_(N) = p_N to 1e-10, Σ d² = N!): PASS");
}

#[test]
fn criterion_7_interferometer_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    // first quantization matches the permanent oracle entrywise
    for (m, n) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
        for _ in 0..20 {
            let u = random_unitary::<f64, _>(m, &mut rng);
            for m_in in occupations(m, n) {
                let rho = dicke_state::<f64>(&m_in.canonical_assignment().unwrap()).unwrap();
                let dist = outcome_distribution(&rho, &u).unwrap();
                for m_out in occupations(m, n) {
                    let direct = dist.probability(&m_out);
                    let oracle = permanent_oracle(&u, &m_in, &m_out).unwrap();
                    assert!(
                        (direct - oracle).abs() < 1e-9,
                        "({m},{n}) {m_in} -> {m_out}"
                    );
                }
            }
        }
    }
    // HOM dip
    let rho = dicke_state::<f64>(&ModeAssignment::new(vec![1, 2], 2).unwrap()).unwrap();
    let dist = outcome_distribution(&rho, &beamsplitter::<f64>()).unwrap();
    assert!(
        dist.probability(&ModeOccupation::new(vec![1, 1]).unwrap())
            .abs()
            < 1e-12
    );
    // detector completeness
    for (m, n) in [(2usize, 2usize), (2, 3), (3, 3), (2, 4), (3, 4), (4, 4)] {
        let mut sum = DenseOperator::<f64>::zeros(m, n).unwrap();
        for occ in occupations(m, n) {
            sum = sum.add(&measurement_operator::<f64>(&occ, n).unwrap());
        }
        assert!(sum.distance(&DenseOperator::identity(m, n).unwrap()) < 1e-10);
    }
    println!("acceptance criterion 7 (permanent oracle to 1e-9 over 20 unitaries per (M,N), HOM dip < 1e-12, detector completeness < 1e-10): PASS");
}

#[test]
fn criterion_8_tomography() {
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    for n in [2usize, 3] {
        // invariant-space dimension matches the numerical rank of the
        // assembled J(n) set
        let k = invariant_dimension(2, n);
        let basis = bosind::tomography::hermitian_basis::<f64>(2);
        let indices = bosind::tomography::multi_indices(4, n);
        let dim = 2usize.pow(n as u32);
        let mut stacked = DMatrix::<f64>::zeros(2 * dim * dim, k);
        for (col, idx) in indices.iter().enumerate() {
            let j = bosind::tomography::j_operator(idx, &basis, 2).unwrap();
            for r in 0..dim {
                for c in 0..dim {
                    stacked[(r * dim + c, col)] = j.matrix()[(r, c)].re;
                    stacked[(dim * dim + r * dim + c, col)] = j.matrix()[(r, c)].im;
                }
            }
        }
        let svd = stacked.svd(false, false);
        let smax = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > smax * 1e-10)
            .count();
        assert_eq!(rank, k);

        // noiseless round trip with K certified settings
        let mut targets = vec![dicke_state::<f64>(
            &ModeAssignment::new((1..=n).map(|i| i.min(2)).collect(), 2).unwrap(),
        )
        .unwrap()];
        for _ in 0..4 {
            targets.push(random_invariant::<f64, _>(2, n, &mut rng).unwrap());
        }
        let obs = random_observable_basis::<f64, _>(2, n, &mut rng).unwrap();
        let settings = design_unitaries(&obs);
        assert_eq!(settings.len(), k);
        for rho in &targets {
            let records = simulate_records(rho, &settings).unwrap();
            let (rec, report) = reconstruct_state(&records, 2, n).unwrap();
            assert!(
                rec.operator().distance(rho.operator()) < 1e-6,
                "round trip at N = {n}"
            );
            assert_eq!(report.rank, k);
        }
    }
    // p_2 through the product expansion matches the direct trace
    for _ in 0..20 {
        let rho = random_invariant::<f64, _>(2, 3, &mut rng).unwrap();
        let direct = p_k(&rho, 2).unwrap();
        let expanded = p2_from_expansion(&rho).unwrap();
        assert!((direct - expanded).abs() < 1e-8);
    }
    println!("acceptance criterion 8 (tomography round trip < 1e-6 at K(M,N) settings, J-rank = K, p2 expansion to 1e-8): PASS");
}

#[test]
fn criterion_9_purifications() {
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    for n in [2usize, 3] {
        for _ in 0..25 {
            let rho = random_invariant::<f64, _>(2, n, &mut rng).unwrap();
            let psi = symmetric_purification(&rho).unwrap();

            // permutation symmetry (π ⊗ π)|ψ⟩ = |ψ⟩ on the doubled space
            for p in permutations(n).unwrap() {
                let mut doubled: Vec<usize> = Vec::with_capacity(2 * n);
                doubled.extend((0..n).map(|i| p.apply(i) + 1));
                doubled.extend((0..n).map(|i| n + p.apply(i) + 1));
                let q = Permutation::from_one_line(&doubled).unwrap();
                let d = perm_operator::<f64>(&q, 2).unwrap();
                let moved = d.matrix() * &psi;
                assert!((moved - &psi).norm() < 1e-9);
            }

            // partial trace over the purifying factor returns ρ
            let reduced = bosind::operator::reduced_density(&psi, 2, n, n).unwrap();
            assert!(reduced.distance(rho.operator()) < 1e-8);
        }
    }
    println!("acceptance criterion 9 (purification symmetry < 1e-9 and reduction < 1e-8 for 50 states): PASS");
}
