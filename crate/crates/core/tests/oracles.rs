//! Cross-checks against implementations that share no code with the crate:
//! Kronecker-built matrices, dense projector chains and a hand-written
//! hidden-variable enumeration.

use ctxbell_core::hv::{self, ModelClass, Objective};
use ctxbell_core::inequality::{self, S_TERMS};
use ctxbell_core::sequence::{
    conditional_pair_expectation, product_expectation, sequence_distribution,
};
use ctxbell_core::state::four_qubit_state;
use ctxbell_core::{AliceSequence, Observable, SequenceSpec, Variant, Visibility};
use nalgebra::DMatrix;
use num_complex::Complex64;

type M = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single(letter: char) -> M {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match letter {
        'i' => M::from_row_slice(2, 2, &[one, z, z, one]),
        'x' => M::from_row_slice(2, 2, &[z, one, one, z]),
        'y' => M::from_row_slice(2, 2, &[z, -i, i, z]),
        'z' => M::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => unreachable!(),
    }
}

/// Dense operator from a definition such as `"y1 y2"`; qubit 1 is the most
/// significant factor.
fn dense(definition: &str) -> M {
    let mut letters = ['i'; 4];
    for tok in definition.split_whitespace() {
        let mut chars = tok.chars();
        let l = chars.next().unwrap();
        let q: usize = chars.as_str().parse().unwrap();
        letters[q - 1] = l;
    }
    letters
        .iter()
        .map(|&l| single(l))
        .reduce(|a, b| a.kronecker(&b))
        .unwrap()
}

fn dense_obs(o: Observable) -> M {
    dense(o.definition())
}

fn identity() -> M {
    M::identity(16, 16)
}

fn max_dev(a: &M, b: &M) -> f64 {
    (a - b).iter().fold(0.0, |m, v| m.max(v.norm()))
}

/// `V|ψ⁻⟩⟨ψ⁻|_{13} ⊗ V|ψ⁻⟩⟨ψ⁻|_{24}` plus per-pair white noise, by index.
fn dense_state(v: f64) -> M {
    let mut w = [[0.0f64; 4]; 4];
    for (k, row) in w.iter_mut().enumerate() {
        row[k] = (1.0 - v) / 4.0;
    }
    w[1][1] += v / 2.0;
    w[2][2] += v / 2.0;
    w[1][2] -= v / 2.0;
    w[2][1] -= v / 2.0;
    let bit = |idx: usize, q: usize| (idx >> (4 - q)) & 1;
    M::from_fn(16, 16, |i, j| {
        let p13 = |x: usize| 2 * bit(x, 1) + bit(x, 3);
        let p24 = |x: usize| 2 * bit(x, 2) + bit(x, 4);
        c(w[p13(i)][p13(j)] * w[p24(i)][p24(j)], 0.0)
    })
}

fn projector(o: &M, sign: f64) -> M {
    (identity() + o * c(sign, 0.0)) * c(0.5, 0.0)
}

/// Outcome probabilities of measuring `ops` in order, by explicit projector
/// chains: `p(s) = tr(Π_n⋯Π_1 ρ Π_1⋯Π_n)`.
fn chain(rho: &M, ops: &[M]) -> Vec<(Vec<f64>, f64)> {
    let n = ops.len();
    (0..1usize << n)
        .map(|bits| {
            let signs: Vec<f64> = (0..n)
                .map(|k| if bits >> k & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            let mut k = identity();
            for (o, &s) in ops.iter().zip(&signs) {
                k = projector(o, s) * k;
            }
            let p = (&k * rho * k.adjoint()).trace().re;
            (signs, p)
        })
        .collect()
}

fn dense_product_expectation(rho: &M, seq: AliceSequence) -> f64 {
    let ops: Vec<M> = seq.observables().iter().map(|&o| dense_obs(o)).collect();
    chain(rho, &ops)
        .iter()
        .map(|(s, p)| s.iter().product::<f64>() * p)
        .sum()
}

fn dense_pair_expectation(rho: &M, seq: AliceSequence, position: usize, bob: Observable) -> f64 {
    let mut ops: Vec<M> = seq.observables().iter().map(|&o| dense_obs(o)).collect();
    ops.push(dense_obs(bob));
    chain(rho, &ops)
        .iter()
        .map(|(s, p)| s[position - 1] * s[3] * p)
        .sum()
}

#[test]
fn definitions_match_pauli_strings() {
    for o in Observable::ALL {
        let ours = o.pauli().to_matrix().unwrap();
        assert!(max_dev(&ours, &dense_obs(o)) < 1e-12, "{o}");
    }
}

#[test]
fn dense_sequence_products() {
    let expected = [1.0, 1.0, 1.0, 1.0, 1.0, -1.0];
    for (seq, e) in AliceSequence::ALL.iter().zip(expected) {
        let [x, y, z] = seq.observables().map(dense_obs);
        assert!(
            max_dev(&(x * y * z), &(identity() * c(e, 0.0))) < 1e-12,
            "{}",
            seq.label()
        );
    }
}

#[test]
fn dense_commutation_within_sequences_and_across_parties() {
    for seq in AliceSequence::ALL {
        let ops = seq.observables().map(dense_obs);
        for a in &ops {
            for b in &ops {
                assert!(max_dev(&(a * b), &(b * a)) < 1e-12);
            }
        }
    }
    for a in Observable::ALICE {
        for b in Observable::BOB {
            let (ma, mb) = (dense_obs(a), dense_obs(b));
            assert!(max_dev(&(&ma * &mb), &(&mb * &ma)) < 1e-12);
        }
    }
}

#[test]
fn state_matches_index_construction() {
    for v in [0.0, 0.3, 0.8, 1.0] {
        let ours = four_qubit_state(Visibility::new(v).unwrap());
        assert!(max_dev(ours.matrix(), &dense_state(v)) < 1e-14, "V = {v}");
    }
}

#[test]
fn sequence_distributions_match_projector_chains() {
    let v = 0.73;
    let rho = four_qubit_state(Visibility::new(v).unwrap());
    let dense_rho = dense_state(v);
    for t in S_TERMS {
        let dist = sequence_distribution(&rho, t.spec()).unwrap();
        let mut ops: Vec<M> = t
            .sequence
            .observables()
            .iter()
            .map(|&o| dense_obs(o))
            .collect();
        ops.push(dense_obs(t.bob()));
        for (bits, (_, p)) in chain(&dense_rho, &ops).iter().enumerate() {
            assert!((dist.probabilities()[bits] - p).abs() < 1e-12);
        }
    }
}

#[test]
fn correlators_match_dense_oracle() {
    for v in [0.0, 0.5, 0.9, 1.0] {
        let rho = four_qubit_state(Visibility::new(v).unwrap());
        let dense_rho = dense_state(v);
        for seq in AliceSequence::ALL {
            let dist = sequence_distribution(&rho, SequenceSpec::alice_only(seq)).unwrap();
            let ours = product_expectation(&dist);
            assert!((ours - dense_product_expectation(&dense_rho, seq)).abs() < 1e-12);
        }
        for t in S_TERMS {
            let dist = sequence_distribution(&rho, t.spec()).unwrap();
            let ours = conditional_pair_expectation(&dist, t.position()).unwrap();
            let oracle = dense_pair_expectation(&dense_rho, t.sequence, t.position(), t.bob());
            assert!((ours - oracle).abs() < 1e-12, "V = {v}");
        }
    }
}

#[test]
fn perfect_state_values() {
    let rho = dense_state(1.0);
    let chi: f64 = AliceSequence::ALL
        .iter()
        .map(|&s| f64::from(s.chi_sign()) * dense_product_expectation(&rho, s))
        .sum();
    assert!((chi - 6.0).abs() < 1e-12);
    // Singlet pairs anticorrelate z and x and correlate the mixed partners.
    let pairs = [
        (AliceSequence::Abc, 2, Observable::BPrime, -1.0),
        (AliceSequence::Abc, 3, Observable::CPrime, 1.0),
        (AliceSequence::Bac, 2, Observable::LowerAPrime, -1.0),
        (AliceSequence::Bac, 3, Observable::LowerCPrime, 1.0),
        (
            AliceSequence::GammaBetaAlpha,
            3,
            Observable::AlphaPrime,
            1.0,
        ),
        (AliceSequence::GammaBetaAlpha, 2, Observable::BetaPrime, 1.0),
    ];
    for (seq, pos, bob, e) in pairs {
        assert!((dense_pair_expectation(&rho, seq, pos, bob) - e).abs() < 1e-12);
    }
    let r = inequality::omega_at(Visibility::PERFECT).unwrap();
    assert!((r.chi - 6.0).abs() < 1e-9);
    assert!((r.omega_signed - 18.0).abs() < 1e-9);
}

/// Hand-written hidden-variable model over named outcomes.
struct Model {
    /// Shared first values of `A`, `b`, `γ`.
    a1: i32,
    b1: i32,
    g1: i32,
    /// Later values, `[sequence][position − 2]`.
    later: [[i32; 2]; 6],
    /// `B', C', a', c', α', β'`
    bob: [i32; 6],
}

impl Model {
    fn from_bits(mut bits: u32) -> Model {
        let mut take = || {
            let v = if bits & 1 == 1 { -1 } else { 1 };
            bits >>= 1;
            v
        };
        let a1 = take();
        let b1 = take();
        let g1 = take();
        let mut later = [[0; 2]; 6];
        for s in &mut later {
            s[0] = take();
            s[1] = take();
        }
        let mut bob = [0; 6];
        for b in &mut bob {
            *b = take();
        }
        Model {
            a1,
            b1,
            g1,
            later,
            bob,
        }
    }

    fn omega(&self, signed: bool) -> i32 {
        let [abc, bac, gba, aaa, bbb, gcc] = self.later;
        let chi = self.a1 * abc[0] * abc[1]
            + self.b1 * bac[0] * bac[1]
            + self.g1 * gba[0] * gba[1]
            + self.a1 * aaa[0] * aaa[1]
            + self.b1 * bbb[0] * bbb[1]
            - self.g1 * gcc[0] * gcc[1];
        let [bp, cp, ap, lcp, alp, bep] = self.bob;
        // (sign, alice value, bob value)
        let terms = [
            (-1, abc[0], bp),
            (-1, bbb[0], bp),
            (1, abc[1], cp),
            (1, gcc[1], cp),
            (-1, bac[0], ap),
            (-1, aaa[0], ap),
            (1, bac[1], lcp),
            (1, gcc[0], lcp),
            (1, gba[1], alp),
            (1, aaa[1], alp),
            (1, gba[0], bep),
            (1, bbb[1], bep),
        ];
        let s: i32 = terms
            .iter()
            .map(|&(sign, a, b)| if signed { sign * a * b } else { (a * b).abs() })
            .sum();
        chi + s
    }
}

#[test]
fn brute_force_local_bounds() {
    let (mut signed_max, mut abs_max) = (i32::MIN, i32::MIN);
    for bits in 0..1u32 << 21 {
        let m = Model::from_bits(bits);
        signed_max = signed_max.max(m.omega(true));
        abs_max = abs_max.max(m.omega(false));
    }
    assert_eq!(signed_max, 16);
    assert_eq!(abs_max, 18);
    let signed = hv::local_omega_bound(Variant::Signed);
    let abs = hv::local_omega_bound(Variant::Abs);
    assert_eq!(signed.max_value, signed_max);
    assert_eq!(abs.max_value, abs_max);
}

#[test]
fn brute_force_noncontextual_chi() {
    // Nine fixed values; rows and columns as products.
    let mut best = i32::MIN;
    for bits in 0..1u32 << 9 {
        let v: Vec<i32> = (0..9)
            .map(|k| if bits >> k & 1 == 1 { -1 } else { 1 })
            .collect();
        let row = |r: usize| v[3 * r] * v[3 * r + 1] * v[3 * r + 2];
        let col = |k: usize| v[k] * v[k + 3] * v[k + 6];
        best = best.max(row(0) + row(1) + row(2) + col(0) + col(1) - col(2));
    }
    assert_eq!(best, 4);
    assert_eq!(hv::noncontextual_chi_bound().max_value, 4);
    assert_eq!(hv::mermin_hatted_bound().max_value, 4);
}

#[test]
fn unconstrained_class_is_a_superset() {
    // Every constrained model embeds with the same ω, so the unconstrained
    // maximum can only be larger or equal.
    let ev_c = hv::Evaluator::new(Objective::OmegaSigned, ModelClass::Constrained);
    let ev_u = hv::Evaluator::new(Objective::OmegaSigned, ModelClass::Unconstrained);
    for idx in (0..ModelClass::Constrained.model_count()).step_by(4099) {
        let m = hv::HvModel::from_index(ModelClass::Constrained, idx).unwrap();
        let u = hv::HvModel::from_tables(ModelClass::Unconstrained, m.alice_table(), m.bob_table())
            .unwrap();
        assert_eq!(ev_c.evaluate(idx), ev_u.evaluate(u.index()));
    }
}

#[test]
fn unconstrained_signed_bound() {
    // Freeing the first values lets χ and S saturate together.
    let b = hv::scan_bound(Objective::OmegaSigned, ModelClass::Unconstrained);
    assert_eq!(b.max_value, 18);
}
