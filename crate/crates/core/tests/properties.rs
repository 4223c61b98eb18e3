use ctxbell_core::hv::{HvModel, ModelClass};
use ctxbell_core::inequality::{self, evaluate_chi, S_TERMS};
use ctxbell_core::pauli::Phase;
use ctxbell_core::sequence::{sequence_distribution, ShotSampler, Tally};
use ctxbell_core::state::{four_qubit_state, Outcome};
use ctxbell_core::{
    AliceSequence, DensityState, Observable, PauliString, SequenceSpec, Variant, Visibility,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn pauli4() -> impl Strategy<Value = PauliString> {
    (0u64..16, 0u64..16, 0u32..4)
        .prop_map(|(x, z, k)| PauliString::from_masks(4, x, z, Phase::from_exponent(k)).unwrap())
}

fn hermitian4() -> impl Strategy<Value = PauliString> {
    pauli4().prop_map(|p| {
        if p.is_hermitian() {
            p
        } else {
            p.mul(&PauliString::from_masks(4, 0, 0, Phase::I).unwrap())
                .unwrap()
        }
    })
}

fn visibility() -> impl Strategy<Value = Visibility> {
    (0.0f64..=1.0).prop_map(|v| Visibility::new(v).unwrap())
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Random mixed four-qubit state `M M† / tr(M M†)`.
fn mixed_state() -> impl Strategy<Value = DensityState> {
    proptest::collection::vec(complex(), 256).prop_filter_map("nonzero trace", |v| {
        let m = DMatrix::from_vec(16, 16, v);
        let rho = &m * m.adjoint();
        let tr = rho.trace();
        if tr.re < 1e-3 {
            return None;
        }
        DensityState::from_matrix(4, rho / tr).ok()
    })
}

fn alice_pure_state() -> impl Strategy<Value = DensityState> {
    // Random Alice pure state on qubits 1, 2 tensored with a random Bob pair.
    (proptest::collection::vec(complex(), 4), visibility()).prop_filter_map("nonzero", |(a, v)| {
        let norm: f64 = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            return None;
        }
        let amps: Vec<Complex64> = a.iter().map(|c| c / norm).collect();
        let alice = DensityState::from_pure(2, &amps).ok()?;
        let bob = ctxbell_core::state::werner_pair(v);
        alice.tensor(&bob).ok()
    })
}

fn max_dev(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().fold(0.0, |m, v| m.max(v.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pauli_product_is_associative(a in pauli4(), b in pauli4(), c in pauli4()) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn hermitian_strings_square_to_identity(p in hermitian4()) {
        let sq = p.mul(&p).unwrap();
        prop_assert_eq!(sq.identity_coefficient(), Some(Phase::ONE));
    }

    #[test]
    fn product_matches_matrix_product(a in pauli4(), b in pauli4()) {
        let lhs = a.mul(&b).unwrap().to_matrix().unwrap();
        let rhs = a.to_matrix().unwrap() * b.to_matrix().unwrap();
        prop_assert!(max_dev(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn commutation_matches_matrices(a in pauli4(), b in pauli4()) {
        let (ma, mb) = (a.to_matrix().unwrap(), b.to_matrix().unwrap());
        let commute = max_dev(&(&ma * &mb), &(&mb * &ma)) < 1e-12;
        prop_assert_eq!(a.commutes(&b).unwrap(), commute);
    }

    #[test]
    fn display_round_trips(p in pauli4()) {
        prop_assert_eq!(p.to_string().parse::<PauliString>().unwrap(), p);
    }

    #[test]
    fn luders_branches_are_states(rho in mixed_state(), p in hermitian4()) {
        let mut total = 0.0;
        for o in Outcome::BOTH {
            let branch = rho.luders_update(&p, o).unwrap();
            total += branch.probability;
            if let Some(post) = branch.state {
                let phys = post.physicality();
                prop_assert!(phys.is_valid(), "{:?}", phys);
                // Repeating the measurement reproduces the outcome.
                let again = post.outcome_probability(&p, o).unwrap();
                prop_assert!((again - 1.0).abs() < 1e-9);
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn compatible_measurement_does_not_disturb(rho in mixed_state(), p in hermitian4(), q in hermitian4()) {
        prop_assume!(p.commutes(&q).unwrap());
        let before = rho.expectation(&q).unwrap();
        let after: f64 = Outcome::BOTH
            .iter()
            .filter_map(|&o| {
                let b = rho.luders_update(&p, o).unwrap();
                b.state.map(|s| b.probability * s.expectation(&q).unwrap())
            })
            .sum();
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn no_signaling_at_any_visibility(v in visibility(), bob_idx in 0usize..6) {
        let rho = four_qubit_state(v);
        let bob = Observable::BOB[bob_idx];
        let direct = rho.outcome_probability(&bob.pauli(), Outcome::Plus).unwrap();
        for seq in AliceSequence::ALL {
            let dist = sequence_distribution(&rho, SequenceSpec::with_bob(seq, bob).unwrap()).unwrap();
            prop_assert!((dist.bob_marginal().unwrap()[0] - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn marginals_do_not_depend_on_position(rho in mixed_state()) {
        // A, b and γ each appear first in one sequence and elsewhere in another.
        for t in S_TERMS {
            let obs = t.sequence.observables()[t.position() - 1];
            let direct = rho.outcome_probability(&obs.pauli(), Outcome::Plus).unwrap();
            let dist = sequence_distribution(&rho, t.spec()).unwrap();
            prop_assert!((dist.marginal(t.position()).unwrap()[0] - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn chi_is_state_independent(rho in alice_pure_state()) {
        prop_assert!((evaluate_chi(&rho).unwrap().chi() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn chi_is_six_for_mixed_states(rho in mixed_state()) {
        prop_assert!((evaluate_chi(&rho).unwrap().chi() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn signed_s_polynomial(v in visibility()) {
        let r = inequality::omega_at(v).unwrap();
        let x = v.get();
        prop_assert!((r.s_signed - (4.0 * x + 8.0 * x * x)).abs() < 1e-10);
        prop_assert!((r.omega_signed - r.chi - r.s_signed).abs() < 1e-12);
    }

    #[test]
    fn flip_preserves_omega(index in 0u32..(1 << 21)) {
        let m = HvModel::from_index(ModelClass::Constrained, index).unwrap();
        let f = m.flip_contextual();
        for var in Variant::BOTH {
            prop_assert_eq!(m.omega(var), f.omega(var));
        }
        prop_assert_eq!(f.flip_contextual(), m);
    }

    #[test]
    fn chain_inequality_holds(index in 0u32..(1 << 24)) {
        prop_assert!(HvModel::from_index(ModelClass::Unconstrained, index).unwrap().chain_inequality_check());
    }

    #[test]
    fn tally_is_partition_independent(v in visibility(), seed in any::<u64>(), split in 1u64..400) {
        let rho = four_qubit_state(v);
        let dist = sequence_distribution(&rho, S_TERMS[3].spec()).unwrap();
        let sampler = ShotSampler::new(&dist);
        let whole = sampler.tally(seed, 7, 0..400);
        let mut parts = sampler.tally(seed, 7, 0..split);
        parts.merge(&sampler.tally(seed, 7, split..400));
        prop_assert_eq!(whole.counts(), parts.counts());
        let mut by_hand = Tally::new(sampler.spec());
        sampler.for_each_in(seed, 7, 0..400, |_, o| by_hand.add(o));
        prop_assert_eq!(whole.counts(), by_hand.counts());
    }
}

/// Each correlator is a polynomial of degree at most two in `V`: a quadratic
/// through three points predicts the other two.
#[test]
fn correlators_are_at_most_quadratic_in_visibility() {
    let vs = [0.0, 0.25, 0.5, 0.75, 1.0];
    let reports: Vec<_> = vs
        .iter()
        .map(|&v| inequality::omega_at(Visibility::new(v).unwrap()).unwrap())
        .collect();
    let lagrange = |y: [f64; 3], x: f64| {
        let xs = [0.0, 0.5, 1.0];
        (0..3)
            .map(|i| {
                let mut term = y[i];
                for j in 0..3 {
                    if j != i {
                        term *= (x - xs[j]) / (xs[i] - xs[j]);
                    }
                }
                term
            })
            .sum::<f64>()
    };
    for k in 0..12 {
        let y = [
            reports[0].s_terms.0[k],
            reports[2].s_terms.0[k],
            reports[4].s_terms.0[k],
        ];
        for (i, x) in [(1, 0.25), (3, 0.75)] {
            assert!((lagrange(y, x) - reports[i].s_terms.0[k]).abs() < 1e-12);
        }
    }
    for r in &reports {
        assert!((r.chi - 6.0).abs() < 1e-12);
    }
}

#[test]
fn non_finite_matrices_are_rejected() {
    let nan = DMatrix::from_element(16, 16, Complex64::new(f64::NAN, 0.0));
    assert!(DensityState::from_matrix(4, nan).is_err());
}
