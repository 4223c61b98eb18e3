//! Exhaustive enumeration of deterministic hidden-variable models.
//!
//! A local model fixes every outcome in advance. Alice's outcomes are
//! indexed by (sequence, position), so a later measurement may depend on
//! what was measured before it on her side. The first measurement of each
//! sequence can only be `A`, `b` or `γ`, and those three carry one value
//! each. Bob's six outcomes cannot depend on Alice's choice.
//!
//! Models are bit-packed into a `u32` (bit set means outcome `−1`), and
//! every χ or S term is a parity over a fixed mask, so one evaluation is a
//! handful of `popcnt`s.
//!
//! Bounds over probabilistic models follow from the deterministic scan: the
//! signed objective is linear in the model distribution and the absolute
//! value objective is convex, so both are maximized at a vertex.

use core::fmt;
use core::ops::Range;

use alloc::vec::Vec;

use crate::inequality::{Variant, S_TERMS};
use crate::pauli::Observable;
use crate::sequence::AliceSequence;
use crate::{Error, Result};

/// Lowest-index argmax models kept per scan.
pub const WITNESS_LIMIT: usize = 8;

#[inline]
fn parity_sign(bits: u32) -> i32 {
    1 - 2 * (bits.count_ones() & 1) as i32
}

#[inline]
fn sign_of(bit: bool) -> i8 {
    if bit {
        -1
    } else {
        1
    }
}

/// Which 9-variable expression a [`NoncontextualAssignment`] is read against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssignmentForm {
    /// One context-free value per Alice observable; the χ expression.
    Observables,
    /// `A, b, γ` plus Bob's first-measured values `B̂', Ĉ', â', ĉ', α̂', β̂'`.
    Hatted,
}

impl AssignmentForm {
    pub const fn labels(self) -> [&'static str; 9] {
        match self {
            AssignmentForm::Observables => ["A", "B", "C", "a", "b", "c", "α", "β", "γ"],
            AssignmentForm::Hatted => ["A", "b", "γ", "B̂'", "Ĉ'", "â'", "ĉ'", "α̂'", "β̂'"],
        }
    }

    /// Six `(variables, sign)` triple products.
    pub const fn terms(self) -> [([usize; 3], i8); 6] {
        match self {
            // A B C | b a c | γ β α | A a α | b B β | γ c C
            AssignmentForm::Observables => [
                ([0, 1, 2], 1),
                ([4, 3, 5], 1),
                ([8, 7, 6], 1),
                ([0, 3, 6], 1),
                ([4, 1, 7], 1),
                ([8, 5, 2], -1),
            ],
            // A B̂' Ĉ' | b â' ĉ' | γ β̂' α̂' | A â' α̂' | b B̂' β̂' | γ ĉ' Ĉ'
            AssignmentForm::Hatted => [
                ([0, 3, 4], 1),
                ([1, 5, 6], 1),
                ([2, 8, 7], 1),
                ([0, 5, 7], 1),
                ([1, 3, 8], 1),
                ([2, 6, 4], -1),
            ],
        }
    }

    fn masks(self) -> [(u32, i8); 6] {
        self.terms()
            .map(|(vars, sign)| (vars.iter().fold(0u32, |m, &v| m | (1 << v)), sign))
    }
}

/// Nine context-free `±1` values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NoncontextualAssignment {
    form: AssignmentForm,
    bits: u16,
}

impl NoncontextualAssignment {
    pub const COUNT: u32 = 1 << 9;

    pub fn from_index(form: AssignmentForm, index: u32) -> Self {
        NoncontextualAssignment {
            form,
            bits: (index & 0x1ff) as u16,
        }
    }

    pub fn from_values(form: AssignmentForm, values: [i8; 9]) -> Result<Self> {
        let mut bits = 0u16;
        for (i, v) in values.into_iter().enumerate() {
            match v {
                1 => {}
                -1 => bits |= 1 << i,
                _ => return Err(outcome_error(v)),
            }
        }
        Ok(NoncontextualAssignment { form, bits })
    }

    pub fn form(&self) -> AssignmentForm {
        self.form
    }

    pub fn index(&self) -> u32 {
        u32::from(self.bits)
    }

    pub fn values(&self) -> [i8; 9] {
        core::array::from_fn(|i| sign_of((self.bits >> i) & 1 == 1))
    }

    /// Value of the signed six-term expression.
    pub fn evaluate(&self) -> i32 {
        self.form
            .masks()
            .iter()
            .map(|&(m, s)| i32::from(s) * parity_sign(u32::from(self.bits) & m))
            .sum()
    }
}

fn outcome_error(v: i8) -> Error {
    Error::Domain {
        what: "outcome",
        value: f64::from(v),
        range: "{-1, +1}",
    }
}

/// Whether the first-position values of `A`, `b`, `γ` are shared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelClass {
    /// 3 shared first values + 12 later values + 6 Bob values = 21 bits.
    Constrained,
    /// All 18 Alice slots free + 6 Bob values = 24 bits.
    Unconstrained,
}

impl ModelClass {
    pub const fn bits(self) -> u32 {
        match self {
            ModelClass::Constrained => 21,
            ModelClass::Unconstrained => 24,
        }
    }

    pub const fn model_count(self) -> u32 {
        1 << self.bits()
    }

    pub const fn name(self) -> &'static str {
        match self {
            ModelClass::Constrained => "constrained",
            ModelClass::Unconstrained => "unconstrained",
        }
    }

    /// Bit holding Alice's outcome at `(sequence, position)`.
    pub const fn alice_bit(self, sequence: AliceSequence, position: usize) -> u32 {
        let s = sequence.index() as u32;
        match self {
            ModelClass::Constrained => {
                if position == 1 {
                    match sequence {
                        AliceSequence::Abc | AliceSequence::AaAlpha => 0,
                        AliceSequence::Bac | AliceSequence::BbBeta => 1,
                        AliceSequence::GammaBetaAlpha | AliceSequence::GammaCC => 2,
                    }
                } else {
                    3 + 2 * s + (position as u32 - 2)
                }
            }
            ModelClass::Unconstrained => 3 * s + (position as u32 - 1),
        }
    }

    /// Bit holding Bob's outcome for `obs` (one of [`Observable::BOB`]).
    pub fn bob_bit(self, obs: Observable) -> u32 {
        let k = Observable::BOB
            .iter()
            .position(|&b| b == obs)
            .expect("Bob observable") as u32;
        match self {
            ModelClass::Constrained => 15 + k,
            ModelClass::Unconstrained => 18 + k,
        }
    }

    fn bob_mask(self) -> u32 {
        Observable::BOB
            .iter()
            .fold(0, |m, &o| m | (1 << self.bob_bit(o)))
    }

    /// Alice bits that are never a first measurement.
    fn later_mask(self) -> u32 {
        AliceSequence::ALL.iter().fold(0, |m, &s| {
            m | (1 << self.alice_bit(s, 2)) | (1 << self.alice_bit(s, 3))
        })
    }

    fn chi_masks(self) -> [(u32, i8); 6] {
        AliceSequence::ALL.map(|s| {
            let m = (1..=3).fold(0u32, |m, p| m | (1 << self.alice_bit(s, p)));
            (m, s.chi_sign())
        })
    }

    fn s_masks(self) -> [(u32, i8); 12] {
        S_TERMS.map(|t| {
            let m = (1 << self.alice_bit(t.sequence, t.position())) | (1 << self.bob_bit(t.bob()));
            (m, t.quantum_sign)
        })
    }
}

/// What a scan maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    /// χ with context-dependent Alice values.
    ContextualChi,
    /// χ + signed S.
    OmegaSigned,
    /// χ + Σ|correlator|; every deterministic correlator has magnitude 1.
    OmegaAbs,
}

impl Objective {
    pub const fn for_variant(variant: Variant) -> Self {
        match variant {
            Variant::Abs => Objective::OmegaAbs,
            Variant::Signed => Objective::OmegaSigned,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Objective::ContextualChi => "contextual-chi",
            Objective::OmegaSigned => "omega-signed",
            Objective::OmegaAbs => "omega-abs",
        }
    }
}

/// Precomputed term masks for one (objective, class) pair.
#[derive(Clone, Debug)]
pub struct Evaluator {
    class: ModelClass,
    objective: Objective,
    terms: Vec<(u32, i32)>,
    offset: i32,
}

impl Evaluator {
    pub fn new(objective: Objective, class: ModelClass) -> Self {
        let mut terms: Vec<(u32, i32)> = class
            .chi_masks()
            .iter()
            .map(|&(m, s)| (m, i32::from(s)))
            .collect();
        let mut offset = 0;
        match objective {
            Objective::ContextualChi => {}
            Objective::OmegaSigned => {
                terms.extend(class.s_masks().iter().map(|&(m, s)| (m, i32::from(s))))
            }
            Objective::OmegaAbs => offset = S_TERMS.len() as i32,
        }
        Evaluator {
            class,
            objective,
            terms,
            offset,
        }
    }

    pub fn class(&self) -> ModelClass {
        self.class
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    #[inline]
    pub fn evaluate(&self, index: u32) -> i32 {
        self.offset
            + self
                .terms
                .iter()
                .map(|&(m, s)| s * parity_sign(index & m))
                .sum::<i32>()
    }

    /// Scans `range` of model indices.
    pub fn scan(&self, range: Range<u32>) -> ScanPartial {
        let mut part = ScanPartial::empty();
        for index in range {
            part.offer(self.evaluate(index), index);
        }
        part
    }
}

/// Maximum and lowest-index witnesses over a contiguous index range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanPartial {
    pub max: i32,
    /// Sorted ascending, at most [`WITNESS_LIMIT`] entries.
    pub witnesses: Vec<u32>,
    pub argmax_count: u64,
    pub scanned: u64,
}

impl ScanPartial {
    pub fn empty() -> Self {
        ScanPartial {
            max: i32::MIN,
            witnesses: Vec::new(),
            argmax_count: 0,
            scanned: 0,
        }
    }

    #[inline]
    fn offer(&mut self, value: i32, index: u32) {
        self.scanned += 1;
        if value > self.max {
            self.max = value;
            self.witnesses.clear();
            self.argmax_count = 0;
        }
        if value == self.max {
            self.argmax_count += 1;
            if self.witnesses.len() < WITNESS_LIMIT {
                self.witnesses.push(index);
            }
        }
    }

    /// Combines two partials; the result does not depend on how the index
    /// space was split.
    pub fn merge(self, other: ScanPartial) -> ScanPartial {
        let scanned = self.scanned + other.scanned;
        let (max, witnesses, argmax_count) = match self.max.cmp(&other.max) {
            core::cmp::Ordering::Greater => (self.max, self.witnesses, self.argmax_count),
            core::cmp::Ordering::Less => (other.max, other.witnesses, other.argmax_count),
            core::cmp::Ordering::Equal => {
                let mut w = self.witnesses;
                w.extend(other.witnesses);
                w.sort_unstable();
                w.dedup();
                w.truncate(WITNESS_LIMIT);
                (self.max, w, self.argmax_count + other.argmax_count)
            }
        };
        ScanPartial {
            max,
            witnesses,
            argmax_count,
            scanned,
        }
    }
}

/// One deterministic local model.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct HvModel {
    class: ModelClass,
    index: u32,
}

impl HvModel {
    pub fn from_index(class: ModelClass, index: u32) -> Result<Self> {
        if index >= class.model_count() {
            return Err(Error::Domain {
                what: "model index",
                value: f64::from(index),
                range: "< 2^bits",
            });
        }
        Ok(HvModel { class, index })
    }

    /// Builds a model from explicit tables. `alice[s][p]` is the outcome at
    /// position `p + 1` of `AliceSequence::ALL[s]`; `bob` follows
    /// [`Observable::BOB`]. In the constrained class, first positions that
    /// share a label must agree.
    pub fn from_tables(class: ModelClass, alice: [[i8; 3]; 6], bob: [i8; 6]) -> Result<Self> {
        let mut index = 0u32;
        let mut set = 0u32;
        let mut put = |bit: u32, v: i8| -> Result<()> {
            let b = match v {
                1 => false,
                -1 => true,
                _ => return Err(outcome_error(v)),
            };
            if set & (1 << bit) != 0 && ((index >> bit) & 1 == 1) != b {
                return Err(Error::Domain {
                    what: "shared first-position value",
                    value: f64::from(v),
                    range: "equal across sequences",
                });
            }
            set |= 1 << bit;
            if b {
                index |= 1 << bit;
            }
            Ok(())
        };
        for s in AliceSequence::ALL {
            for p in 1..=3 {
                put(class.alice_bit(s, p), alice[s.index()][p - 1])?;
            }
        }
        for (k, o) in Observable::BOB.into_iter().enumerate() {
            put(class.bob_bit(o), bob[k])?;
        }
        Ok(HvModel { class, index })
    }

    pub fn class(&self) -> ModelClass {
        self.class
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    /// Alice's outcome at 1-based `position` of `sequence`.
    pub fn alice(&self, sequence: AliceSequence, position: usize) -> i8 {
        sign_of((self.index >> self.class.alice_bit(sequence, position)) & 1 == 1)
    }

    pub fn bob(&self, obs: Observable) -> i8 {
        sign_of((self.index >> self.class.bob_bit(obs)) & 1 == 1)
    }

    pub fn alice_table(&self) -> [[i8; 3]; 6] {
        AliceSequence::ALL.map(|s| [1, 2, 3].map(|p| self.alice(s, p)))
    }

    pub fn bob_table(&self) -> [i8; 6] {
        Observable::BOB.map(|o| self.bob(o))
    }

    pub fn chi_terms(&self) -> [i8; 6] {
        AliceSequence::ALL.map(|s| self.alice(s, 1) * self.alice(s, 2) * self.alice(s, 3))
    }

    pub fn chi(&self) -> i32 {
        AliceSequence::ALL
            .iter()
            .zip(self.chi_terms())
            .map(|(s, v)| i32::from(s.chi_sign()) * i32::from(v))
            .sum()
    }

    /// The twelve correlator products, ordered as [`S_TERMS`].
    pub fn s_terms(&self) -> [i8; 12] {
        S_TERMS.map(|t| self.alice(t.sequence, t.position()) * self.bob(t.bob()))
    }

    pub fn s(&self, variant: Variant) -> i32 {
        self.s_terms()
            .iter()
            .zip(S_TERMS)
            .map(|(&v, t)| match variant {
                Variant::Abs => i32::from(v).abs(),
                Variant::Signed => i32::from(t.quantum_sign) * i32::from(v),
            })
            .sum()
    }

    pub fn omega(&self, variant: Variant) -> i32 {
        self.chi() + self.s(variant)
    }

    /// Flips Bob's values and every Alice value that is not a first
    /// measurement. Both ω variants are invariant under this map.
    pub fn flip_contextual(&self) -> HvModel {
        HvModel {
            class: self.class,
            index: self.index ^ self.class.bob_mask() ^ self.class.later_mask(),
        }
    }

    /// Checks, for every sequence `f x y` with Bob partners `x'`, `y'`:
    ///
    /// * `|f x̂' ŷ' − f x ŷ'| = |1 − x x̂'|`
    /// * `|f x ŷ' − f x y| = |1 − y ŷ'|`
    /// * `σ f x̂' ŷ' ≥ σ f x y − (1 − x x̂') − (1 − y ŷ')`
    ///
    /// where `σ` is the sequence's χ sign and hatted values are Bob's.
    pub fn chain_inequality_check(&self) -> bool {
        AliceSequence::ALL.iter().all(|&s| {
            let [_, second, third] = s.observables();
            let f = i32::from(self.alice(s, 1));
            let x = i32::from(self.alice(s, 2));
            let y = i32::from(self.alice(s, 3));
            let xh = i32::from(self.bob(second.partner().expect("partnered")));
            let yh = i32::from(self.bob(third.partner().expect("partnered")));
            let sigma = i32::from(s.chi_sign());
            let pen_x = 1 - x * xh;
            let pen_y = 1 - y * yh;
            (f * xh * yh - f * x * yh).abs() == pen_x.abs()
                && (f * x * yh - f * x * y).abs() == pen_y.abs()
                && sigma * f * xh * yh >= sigma * f * x * y - pen_x - pen_y
        })
    }
}

impl fmt::Debug for HvModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HvModel")
            .field("class", &self.class)
            .field("index", &self.index)
            .field("alice", &self.alice_table())
            .field("bob", &self.bob_table())
            .finish()
    }
}

/// Outcome of an exhaustive scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult<W> {
    pub objective: &'static str,
    pub max_value: i32,
    /// Lowest-index maximizers, at least one.
    pub argmax_models: Vec<W>,
    pub argmax_count: u64,
    pub models_scanned: u64,
}

fn assignment_bound(
    form: AssignmentForm,
    objective: &'static str,
) -> BoundResult<NoncontextualAssignment> {
    let mut part = ScanPartial::empty();
    for i in 0..NoncontextualAssignment::COUNT {
        part.offer(NoncontextualAssignment::from_index(form, i).evaluate(), i);
    }
    BoundResult {
        objective,
        max_value: part.max,
        argmax_models: part
            .witnesses
            .iter()
            .map(|&i| NoncontextualAssignment::from_index(form, i))
            .collect(),
        argmax_count: part.argmax_count,
        models_scanned: part.scanned,
    }
}

/// Maximum of χ over all 2⁹ context-free assignments.
pub fn noncontextual_chi_bound() -> BoundResult<NoncontextualAssignment> {
    assignment_bound(AssignmentForm::Observables, "noncontextual-chi")
}

/// Maximum of the hatted six-term expression over all 2⁹ assignments.
pub fn mermin_hatted_bound() -> BoundResult<NoncontextualAssignment> {
    assignment_bound(AssignmentForm::Hatted, "hatted-chi")
}

/// Converts a merged scan into a [`BoundResult`].
pub fn bound_from_partial(evaluator: &Evaluator, part: ScanPartial) -> BoundResult<HvModel> {
    let class = evaluator.class();
    BoundResult {
        objective: evaluator.objective().name(),
        max_value: part.max,
        argmax_models: part
            .witnesses
            .iter()
            .map(|&index| HvModel { class, index })
            .collect(),
        argmax_count: part.argmax_count,
        models_scanned: part.scanned,
    }
}

/// Single-threaded scan of every model in `class`.
pub fn scan_bound(objective: Objective, class: ModelClass) -> BoundResult<HvModel> {
    let ev = Evaluator::new(objective, class);
    let part = ev.scan(0..class.model_count());
    bound_from_partial(&ev, part)
}

/// Local bound on ω over all 2²¹ constrained models.
pub fn local_omega_bound(variant: Variant) -> BoundResult<HvModel> {
    scan_bound(Objective::for_variant(variant), ModelClass::Constrained)
}

/// Result of running [`HvModel::chain_inequality_check`] over a range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPartial {
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<u32>,
}

impl ChainPartial {
    pub fn merge(self, other: ChainPartial) -> ChainPartial {
        ChainPartial {
            checked: self.checked + other.checked,
            failures: self.failures + other.failures,
            first_failure: match (self.first_failure, other.first_failure) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }
}

pub fn chain_check_range(class: ModelClass, range: Range<u32>) -> ChainPartial {
    let mut out = ChainPartial {
        checked: 0,
        failures: 0,
        first_failure: None,
    };
    for index in range {
        out.checked += 1;
        if !(HvModel { class, index }).chain_inequality_check() {
            out.failures += 1;
            out.first_failure.get_or_insert(index);
        }
    }
    out
}

/// Quantum values minus classical bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapReport {
    pub chi_quantum: f64,
    pub chi_bound: f64,
    pub omega_quantum_signed: f64,
    pub omega_bound_signed: f64,
    pub omega_quantum_abs: f64,
    pub omega_bound_abs: f64,
}

impl GapReport {
    pub fn chi_gap(&self) -> f64 {
        self.chi_quantum - self.chi_bound
    }

    pub fn signed_gap(&self) -> f64 {
        self.omega_quantum_signed - self.omega_bound_signed
    }

    pub fn abs_gap(&self) -> f64 {
        self.omega_quantum_abs - self.omega_bound_abs
    }

    /// The signed ω gap equals the χ gap.
    pub fn gaps_equal(&self) -> bool {
        libm::fabs(self.signed_gap() - self.chi_gap()) < 1e-9
    }

    /// The abs ω variant is not violated by the quantum value.
    pub fn abs_gap_vanishes(&self) -> bool {
        self.abs_gap() <= 1e-9
    }
}

/// Assembles the gap report from quantum values and scan results.
pub fn bound_gap_report(
    quantum: &crate::inequality::InequalityReport,
    chi_bound: &BoundResult<NoncontextualAssignment>,
    signed: &BoundResult<HvModel>,
    abs: &BoundResult<HvModel>,
) -> GapReport {
    GapReport {
        chi_quantum: quantum.chi,
        chi_bound: f64::from(chi_bound.max_value),
        omega_quantum_signed: quantum.omega_signed,
        omega_bound_signed: f64::from(signed.max_value),
        omega_quantum_abs: quantum.omega_abs,
        omega_bound_abs: f64::from(abs.max_value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noncontextual_bound_is_four() {
        let b = noncontextual_chi_bound();
        assert_eq!(b.max_value, 4);
        assert_eq!(b.models_scanned, 512);
        assert!(!b.argmax_models.is_empty());
        for w in &b.argmax_models {
            assert_eq!(w.evaluate(), 4);
        }
        let ones =
            NoncontextualAssignment::from_values(AssignmentForm::Observables, [1; 9]).unwrap();
        assert_eq!(ones.evaluate(), 4);
        assert_eq!(b.argmax_models[0], ones);
    }

    #[test]
    fn hatted_bound_is_four() {
        let b = mermin_hatted_bound();
        assert_eq!(b.max_value, 4);
        assert_eq!(b.models_scanned, 512);
        let ones = NoncontextualAssignment::from_values(AssignmentForm::Hatted, [1; 9]).unwrap();
        assert_eq!(ones.evaluate(), 4);
    }

    #[test]
    fn assignment_forms_reference_the_right_observables() {
        // Relabeling the observable form through Bob's partners must give
        // exactly the hatted form.
        let obs_labels = AssignmentForm::Observables.labels();
        let hat_labels = AssignmentForm::Hatted.labels();
        fn relabel(l: &str) -> &str {
            match l {
                "B" => "B̂'",
                "C" => "Ĉ'",
                "a" => "â'",
                "c" => "ĉ'",
                "α" => "α̂'",
                "β" => "β̂'",
                other => other,
            }
        }
        for (o, h) in AssignmentForm::Observables
            .terms()
            .iter()
            .zip(AssignmentForm::Hatted.terms())
        {
            assert_eq!(o.1, h.1);
            for k in 0..3 {
                assert_eq!(relabel(obs_labels[o.0[k]]), hat_labels[h.0[k]]);
            }
        }
        for (s, (vars, sign)) in AliceSequence::ALL
            .iter()
            .zip(AssignmentForm::Observables.terms())
        {
            let names = vars.map(|v| obs_labels[v]);
            assert_eq!(names, s.observables().map(Observable::label));
            assert_eq!(sign, s.chi_sign());
        }
    }

    #[test]
    fn bit_layout_is_a_bijection() {
        for class in [ModelClass::Constrained, ModelClass::Unconstrained] {
            let mut used = 0u32;
            for s in AliceSequence::ALL {
                for p in 1..=3 {
                    used |= 1 << class.alice_bit(s, p);
                }
            }
            for o in Observable::BOB {
                let b = class.bob_bit(o);
                assert_eq!(used & (1 << b), 0);
                used |= 1 << b;
            }
            assert_eq!(used, class.model_count() - 1);
        }
    }

    #[test]
    fn evaluator_matches_model_accessors() {
        let evs = [
            Objective::OmegaSigned,
            Objective::OmegaAbs,
            Objective::ContextualChi,
        ]
        .map(|o| Evaluator::new(o, ModelClass::Constrained));
        for index in (0..ModelClass::Constrained.model_count()).step_by(997) {
            let m = HvModel::from_index(ModelClass::Constrained, index).unwrap();
            assert_eq!(evs[0].evaluate(index), m.omega(Variant::Signed));
            assert_eq!(evs[1].evaluate(index), m.omega(Variant::Abs));
            assert_eq!(evs[2].evaluate(index), m.chi());
            assert_eq!(m.s(Variant::Abs), 12);
        }
    }

    #[test]
    fn abs_witness_model() {
        let mut alice = [[1i8; 3]; 6];
        alice[AliceSequence::GammaCC.index()][2] = -1;
        let m = HvModel::from_tables(ModelClass::Constrained, alice, [1; 6]).unwrap();
        assert_eq!(m.chi(), 6);
        assert_eq!(m.s(Variant::Abs), 12);
        assert_eq!(m.omega(Variant::Abs), 18);
        assert!(m.omega(Variant::Signed) <= 16);
        assert_eq!(m.alice_table(), alice);
        assert_eq!(m.bob_table(), [1; 6]);
    }

    #[test]
    fn tables_reject_inconsistent_first_values() {
        let mut alice = [[1i8; 3]; 6];
        alice[AliceSequence::AaAlpha.index()][0] = -1;
        assert!(HvModel::from_tables(ModelClass::Constrained, alice, [1; 6]).is_err());
        assert!(HvModel::from_tables(ModelClass::Unconstrained, alice, [1; 6]).is_ok());
        alice[AliceSequence::AaAlpha.index()][0] = 0;
        assert!(HvModel::from_tables(ModelClass::Unconstrained, alice, [1; 6]).is_err());
    }

    #[test]
    fn chain_check_examples() {
        // All +1: x = x̂', y = ŷ' everywhere, zero penalties.
        let m = HvModel::from_tables(ModelClass::Constrained, [[1; 3]; 6], [1; 6]).unwrap();
        assert!(m.chain_inequality_check());
        // B in ABC opposite to B̂'.
        let mut alice = [[1i8; 3]; 6];
        alice[AliceSequence::Abc.index()][1] = -1;
        let m = HvModel::from_tables(ModelClass::Constrained, alice, [1; 6]).unwrap();
        assert_eq!(m.alice(AliceSequence::Abc, 2), -m.bob(Observable::BPrime));
        assert!(m.chain_inequality_check());
    }

    #[test]
    fn partial_merge_is_split_independent() {
        let ev = Evaluator::new(Objective::OmegaSigned, ModelClass::Constrained);
        let n = 1 << 14;
        let whole = ev.scan(0..n);
        for cuts in [[1000u32, 5000, 9000], [1, 2, 3], [4096, 8192, 12288]] {
            let mut bounds = alloc::vec![0];
            bounds.extend(cuts);
            bounds.push(n);
            let merged = bounds
                .windows(2)
                .rev()
                .map(|w| ev.scan(w[0]..w[1]))
                .fold(ScanPartial::empty(), ScanPartial::merge);
            assert_eq!(merged, whole);
        }
    }

    #[test]
    fn from_index_range() {
        assert!(HvModel::from_index(ModelClass::Constrained, 1 << 21).is_err());
        assert!(HvModel::from_index(ModelClass::Unconstrained, 1 << 21).is_ok());
    }
}
