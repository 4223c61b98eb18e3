//! Alice's measurement sequences, their exact outcome distributions, and a
//! seeded shot sampler.
//!
//! Distributions are computed by walking the Lüders tree: every branch of
//! every measurement is followed with its exact probability, so there is no
//! statistical error in anything derived from an [`OutcomeDistribution`].
//!
//! # Random streams
//!
//! The sampler is keyed by `(seed, stream)`. The generator is
//! `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(stream)`. Shot `i`
//! seeks to word position `2·i` and draws one `u64`; its top 53 bits give a
//! uniform `u ∈ [0, 1)`, and the outcome is the first cell (in index order)
//! whose cumulative probability exceeds `u`. Because every shot owns a fixed
//! slot of the stream, any split of the shot range into partitions yields the
//! same records.

use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use alloc::string::ToString;
use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::pauli::{Observable, Party, PauliString};
use crate::state::{DensityState, Outcome, ZERO_PROBABILITY};
use crate::{Error, Result};

/// The six orders in which Alice measures a commuting triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AliceSequence {
    /// `A, B, C`
    Abc,
    /// `b, a, c`
    Bac,
    /// `γ, β, α`
    GammaBetaAlpha,
    /// `A, a, α`
    AaAlpha,
    /// `b, B, β`
    BbBeta,
    /// `γ, c, C`
    GammaCC,
}

impl AliceSequence {
    pub const ALL: [AliceSequence; 6] = [
        AliceSequence::Abc,
        AliceSequence::Bac,
        AliceSequence::GammaBetaAlpha,
        AliceSequence::AaAlpha,
        AliceSequence::BbBeta,
        AliceSequence::GammaCC,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn observables(self) -> [Observable; 3] {
        use Observable::*;
        match self {
            AliceSequence::Abc => [A, B, C],
            AliceSequence::Bac => [LowerB, LowerA, LowerC],
            AliceSequence::GammaBetaAlpha => [Gamma, Beta, Alpha],
            AliceSequence::AaAlpha => [A, LowerA, Alpha],
            AliceSequence::BbBeta => [LowerB, B, Beta],
            AliceSequence::GammaCC => [Gamma, LowerC, C],
        }
    }

    /// Sign with which `⟨xyz⟩` enters χ: `−1` only for `γcC`.
    pub const fn chi_sign(self) -> i8 {
        match self {
            AliceSequence::GammaCC => -1,
            _ => 1,
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            AliceSequence::Abc => "ABC",
            AliceSequence::Bac => "bac",
            AliceSequence::GammaBetaAlpha => "γβα",
            AliceSequence::AaAlpha => "Aaα",
            AliceSequence::BbBeta => "bBβ",
            AliceSequence::GammaCC => "γcC",
        }
    }

    pub const fn ascii_label(self) -> &'static str {
        match self {
            AliceSequence::Abc => "A-B-C",
            AliceSequence::Bac => "b-a-c",
            AliceSequence::GammaBetaAlpha => "gamma-beta-alpha",
            AliceSequence::AaAlpha => "A-a-alpha",
            AliceSequence::BbBeta => "b-B-beta",
            AliceSequence::GammaCC => "gamma-c-C",
        }
    }

    /// 1-based position of `obs` in this sequence.
    pub fn position_of(self, obs: Observable) -> Option<usize> {
        self.observables()
            .iter()
            .position(|&o| o == obs)
            .map(|p| p + 1)
    }
}

impl fmt::Display for AliceSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AliceSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AliceSequence::ALL
            .into_iter()
            .find(|q| q.label() == s || q.ascii_label() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// An Alice sequence, optionally followed by one Bob observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SequenceSpec {
    alice: AliceSequence,
    bob: Option<Observable>,
}

impl SequenceSpec {
    pub fn alice_only(alice: AliceSequence) -> Self {
        SequenceSpec { alice, bob: None }
    }

    pub fn with_bob(alice: AliceSequence, bob: Observable) -> Result<Self> {
        if bob.party() != Party::Bob {
            return Err(Error::UnknownLabel(bob.label().to_string()));
        }
        Ok(SequenceSpec {
            alice,
            bob: Some(bob),
        })
    }

    pub fn alice(&self) -> AliceSequence {
        self.alice
    }

    pub fn bob(&self) -> Option<Observable> {
        self.bob
    }

    /// Number of outcomes per run: 3, or 4 with Bob.
    pub fn len(&self) -> usize {
        3 + usize::from(self.bob.is_some())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn measured(&self) -> Vec<PauliString> {
        self.alice
            .observables()
            .into_iter()
            .chain(self.bob)
            .map(Observable::pauli)
            .collect()
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.alice.label())?;
        if let Some(b) = self.bob {
            write!(f, "+{}", b.label())?;
        }
        Ok(())
    }
}

/// One outcome tuple packed into bits: bit `i` set means position `i + 1`
/// gave `−1`. Position 4, when present, is Bob's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Outcomes {
    bits: u8,
    len: u8,
}

impl Outcomes {
    pub fn from_index(index: usize, len: usize) -> Self {
        Outcomes {
            bits: index as u8,
            len: len as u8,
        }
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Outcome at 1-based `position`.
    pub fn get(&self, position: usize) -> i8 {
        if (self.bits >> (position - 1)) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn values(&self) -> impl Iterator<Item = i8> + '_ {
        (1..=self.len()).map(|p| self.get(p))
    }

    /// Product of Alice's three outcomes.
    pub fn alice_product(&self) -> i8 {
        if (self.bits & 0b111).count_ones() & 1 == 1 {
            -1
        } else {
            1
        }
    }
}

/// Exact joint distribution of one [`SequenceSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    spec: SequenceSpec,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn spec(&self) -> SequenceSpec {
        self.spec
    }

    /// Probabilities indexed by [`Outcomes::index`].
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, outcomes: Outcomes) -> f64 {
        self.probs[outcomes.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Outcomes, f64)> + '_ {
        let len = self.spec.len();
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (Outcomes::from_index(i, len), p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `[P(+1), P(−1)]` at 1-based `position`.
    pub fn marginal(&self, position: usize) -> Result<[f64; 2]> {
        if position == 0 || position > self.spec.len() {
            return Err(position_error(position));
        }
        let mut m = [0.0; 2];
        for (o, p) in self.iter() {
            m[usize::from(o.get(position) < 0)] += p;
        }
        Ok(m)
    }

    /// Bob's marginal, if Bob measured.
    pub fn bob_marginal(&self) -> Result<[f64; 2]> {
        if self.spec.bob.is_none() {
            return Err(Error::MissingBob);
        }
        self.marginal(4)
    }
}

fn position_error(position: usize) -> Error {
    Error::Domain {
        what: "position",
        value: position as f64,
        range: "1..=len",
    }
}

/// Exact outcome distribution by enumerating every Lüders branch.
pub fn sequence_distribution(
    rho: &DensityState,
    spec: SequenceSpec,
) -> Result<OutcomeDistribution> {
    if rho.n_qubits() != 4 {
        return Err(Error::Dimension {
            left: 4,
            right: rho.n_qubits(),
        });
    }
    let ops = spec.measured();
    let mut probs = alloc::vec![0.0; 1 << ops.len()];
    walk(rho, &ops, 0, 0, 1.0, &mut probs)?;
    Ok(OutcomeDistribution { spec, probs })
}

fn walk(
    rho: &DensityState,
    ops: &[PauliString],
    depth: usize,
    bits: usize,
    weight: f64,
    probs: &mut [f64],
) -> Result<()> {
    let obs = &ops[depth];
    let last = depth + 1 == ops.len();
    for (k, outcome) in Outcome::BOTH.into_iter().enumerate() {
        let index = bits | (k << depth);
        if last {
            let p = rho.outcome_probability(obs, outcome)?;
            probs[index] = if p < ZERO_PROBABILITY {
                0.0
            } else {
                weight * p
            };
        } else {
            let branch = rho.luders_update(obs, outcome)?;
            if let Some(post) = branch.state {
                walk(
                    &post,
                    ops,
                    depth + 1,
                    index,
                    weight * branch.probability,
                    probs,
                )?;
            }
        }
    }
    Ok(())
}

/// `⟨a₁a₂a₃⟩`
pub fn product_expectation(dist: &OutcomeDistribution) -> f64 {
    dist.iter()
        .map(|(o, p)| f64::from(o.alice_product()) * p)
        .sum()
}

/// `⟨a_k · b⟩` with `k` Alice's 1-based position.
pub fn conditional_pair_expectation(
    dist: &OutcomeDistribution,
    alice_position: usize,
) -> Result<f64> {
    if dist.spec.bob.is_none() {
        return Err(Error::MissingBob);
    }
    if !(1..=3).contains(&alice_position) {
        return Err(position_error(alice_position));
    }
    Ok(dist
        .iter()
        .map(|(o, p)| f64::from(o.get(alice_position) * o.get(4)) * p)
        .sum())
}

/// One simulated experimental run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShotRecord {
    pub spec: SequenceSpec,
    pub outcomes: Outcomes,
    pub shot_index: u64,
    pub seed: u64,
}

/// Inverse-CDF sampler over one distribution.
#[derive(Clone, Debug)]
pub struct ShotSampler {
    spec: SequenceSpec,
    cdf: Vec<f64>,
}

const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

impl ShotSampler {
    pub fn new(dist: &OutcomeDistribution) -> Self {
        let mut acc = 0.0;
        let cdf = dist
            .probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        ShotSampler {
            spec: dist.spec,
            cdf,
        }
    }

    pub fn spec(&self) -> SequenceSpec {
        self.spec
    }

    fn cell(&self, u: f64) -> usize {
        // Scaled by the total so rounding in the last partial sum can never
        // leave `u` uncovered.
        let total = *self.cdf.last().expect("non-empty");
        let u = u * total;
        self.cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or_else(|| self.cdf.iter().rposition(|&c| c > 0.0).unwrap_or(0))
    }

    /// Visits shots `range` of stream `(seed, stream)` in order.
    pub fn for_each_in(
        &self,
        seed: u64,
        stream: u64,
        range: Range<u64>,
        mut f: impl FnMut(u64, Outcomes),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng.set_word_pos(2 * u128::from(range.start));
        let len = self.spec.len();
        for i in range {
            let u = (rng.next_u64() >> 11) as f64 * TWO_POW_MINUS_53;
            f(i, Outcomes::from_index(self.cell(u), len));
        }
    }

    /// Records for shots `range` of stream `(seed, stream)`.
    pub fn records(&self, seed: u64, stream: u64, range: Range<u64>) -> Vec<ShotRecord> {
        let mut out = Vec::with_capacity((range.end - range.start) as usize);
        self.for_each_in(seed, stream, range, |shot_index, outcomes| {
            out.push(ShotRecord {
                spec: self.spec,
                outcomes,
                shot_index,
                seed,
            })
        });
        out
    }

    /// Outcome counts for shots `range` of stream `(seed, stream)`.
    pub fn tally(&self, seed: u64, stream: u64, range: Range<u64>) -> Tally {
        let mut t = Tally::new(self.spec);
        self.for_each_in(seed, stream, range, |_, o| t.add(o));
        t
    }
}

/// `shots` i.i.d. runs drawn from the exact distribution, stream 0.
pub fn sample(
    rho: &DensityState,
    spec: SequenceSpec,
    shots: u64,
    seed: u64,
) -> Result<Vec<ShotRecord>> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let dist = sequence_distribution(rho, spec)?;
    Ok(ShotSampler::new(&dist).records(seed, 0, 0..shots))
}

/// Outcome counts, indexed like [`OutcomeDistribution::probabilities`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    spec: SequenceSpec,
    counts: [u64; 16],
}

impl Tally {
    pub fn new(spec: SequenceSpec) -> Self {
        Tally {
            spec,
            counts: [0; 16],
        }
    }

    pub fn from_records(spec: SequenceSpec, records: &[ShotRecord]) -> Self {
        let mut t = Tally::new(spec);
        records.iter().for_each(|r| t.add(r.outcomes));
        t
    }

    pub fn spec(&self) -> SequenceSpec {
        self.spec
    }

    pub fn add(&mut self, o: Outcomes) {
        self.counts[o.index()] += 1;
    }

    pub fn merge(&mut self, other: &Tally) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts[..1 << self.spec.len()]
    }

    pub fn shots(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum of `f(outcomes)` over all shots, `f` returning `±1`.
    fn signed_sum(&self, f: impl Fn(Outcomes) -> i8) -> i64 {
        let len = self.spec.len();
        self.counts()
            .iter()
            .enumerate()
            .map(|(i, &c)| i64::from(f(Outcomes::from_index(i, len))) * c as i64)
            .sum()
    }

    /// Empirical `⟨a₁a₂a₃⟩`.
    pub fn product_mean(&self) -> f64 {
        self.signed_sum(|o| o.alice_product()) as f64 / self.shots() as f64
    }

    /// Empirical `⟨a_k · b⟩`.
    pub fn pair_mean(&self, alice_position: usize) -> Result<f64> {
        if self.spec.bob.is_none() {
            return Err(Error::MissingBob);
        }
        if !(1..=3).contains(&alice_position) {
            return Err(position_error(alice_position));
        }
        Ok(self.signed_sum(|o| o.get(alice_position) * o.get(4)) as f64 / self.shots() as f64)
    }
}

/// Standard error of a `±1` mean: `sqrt((1 − μ²)/shots)`.
pub fn binomial_sigma(mean: f64, shots: u64) -> f64 {
    libm::sqrt((1.0 - mean * mean).max(0.0) / shots as f64)
}
