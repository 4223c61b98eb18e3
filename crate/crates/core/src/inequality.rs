//! The χ, S and ω combinations, visibility thresholds and sweeps.
//!
//! S comes in two variants. [`Variant::Abs`] sums the absolute values of the
//! twelve conditional correlators. [`Variant::Signed`] multiplies each one by
//! the sign it carries for the ideal state, so every term contributes `+1`
//! there. The two agree on the quantum side but have different local bounds
//! (see [`crate::hv`]), so both are always reported.
//!
//! Under per-pair Werner noise χ stays at 6 while the signed S equals
//! `4V + 8V²`: the four `BB'`/`aa'` entries touch one noisy pair and the
//! other eight touch both. Setting `χ + 4V + 8V² = 16` and solving for `V`
//! gives [`visibility_threshold`].

use core::fmt;
use core::str::FromStr;

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::pauli::Observable;
use crate::sequence::{
    conditional_pair_expectation, product_expectation, sequence_distribution, AliceSequence,
    SequenceSpec,
};
use crate::state::{four_qubit_state, DensityState, Visibility};
use crate::{Error, Result};

/// Local bound on ω.
pub const CLASSICAL_BOUND: f64 = 16.0;
/// Noncontextual bound on χ.
pub const NONCONTEXTUAL_CHI_BOUND: f64 = 4.0;

/// How the twelve S correlators are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Abs,
    Signed,
}

impl Variant {
    pub const BOTH: [Variant; 2] = [Variant::Abs, Variant::Signed];

    pub const fn name(self) -> &'static str {
        match self {
            Variant::Abs => "abs",
            Variant::Signed => "signed",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abs" => Ok(Variant::Abs),
            "signed" => Ok(Variant::Signed),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// One of the twelve S entries: `⟨XX'⟩` restricted to runs of `sequence`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct STerm {
    pub alice: Observable,
    pub sequence: AliceSequence,
    /// Sign of `⟨XX'⟩` in the ideal state.
    pub quantum_sign: i8,
}

impl STerm {
    pub fn bob(&self) -> Observable {
        self.alice
            .partner()
            .expect("S terms use partnered observables")
    }

    /// 1-based position of the Alice observable in its sequence.
    pub fn position(&self) -> usize {
        self.sequence
            .position_of(self.alice)
            .expect("S terms reference members of their sequence")
    }

    pub fn spec(&self) -> SequenceSpec {
        SequenceSpec::with_bob(self.sequence, self.bob()).expect("partner is Bob's")
    }
}

const fn term(alice: Observable, sequence: AliceSequence, quantum_sign: i8) -> STerm {
    STerm {
        alice,
        sequence,
        quantum_sign,
    }
}

/// The twelve S entries in summation order.
pub const S_TERMS: [STerm; 12] = {
    use AliceSequence::*;
    use Observable::*;
    [
        term(B, Abc, -1),
        term(B, BbBeta, -1),
        term(C, Abc, 1),
        term(C, GammaCC, 1),
        term(LowerA, Bac, -1),
        term(LowerA, AaAlpha, -1),
        term(LowerC, Bac, 1),
        term(LowerC, GammaCC, 1),
        term(Alpha, GammaBetaAlpha, 1),
        term(Alpha, AaAlpha, 1),
        term(Beta, GammaBetaAlpha, 1),
        term(Beta, BbBeta, 1),
    ]
};

/// `⟨ABC⟩, ⟨bac⟩, ⟨γβα⟩, ⟨Aaα⟩, ⟨bBβ⟩, ⟨γcC⟩`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiTerms(pub [f64; 6]);

impl ChiTerms {
    pub fn get(&self, sequence: AliceSequence) -> f64 {
        self.0[sequence.index()]
    }

    /// Sum with the `(+,+,+,+,+,−)` pattern.
    pub fn chi(&self) -> f64 {
        AliceSequence::ALL
            .iter()
            .map(|s| f64::from(s.chi_sign()) * self.get(*s))
            .sum()
    }
}

/// The twelve conditional correlators, ordered as [`S_TERMS`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct STerms(pub [f64; 12]);

impl STerms {
    pub fn sum(&self, variant: Variant) -> f64 {
        self.0
            .iter()
            .zip(S_TERMS)
            .map(|(&v, t)| match variant {
                Variant::Abs => libm::fabs(v),
                Variant::Signed => f64::from(t.quantum_sign) * v,
            })
            .sum()
    }
}

/// χ, S and ω for both variants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityReport {
    pub chi_terms: ChiTerms,
    pub s_terms: STerms,
    pub chi: f64,
    pub s_abs: f64,
    pub s_signed: f64,
    pub omega_abs: f64,
    pub omega_signed: f64,
    pub classical_bound: f64,
    pub noncontextual_chi_bound: f64,
    pub violated_abs: bool,
    pub violated_signed: bool,
}

impl InequalityReport {
    pub fn from_terms(chi_terms: ChiTerms, s_terms: STerms) -> Self {
        let chi = chi_terms.chi();
        let s_abs = s_terms.sum(Variant::Abs);
        let s_signed = s_terms.sum(Variant::Signed);
        let omega_abs = chi + s_abs;
        let omega_signed = chi + s_signed;
        InequalityReport {
            chi_terms,
            s_terms,
            chi,
            s_abs,
            s_signed,
            omega_abs,
            omega_signed,
            classical_bound: CLASSICAL_BOUND,
            noncontextual_chi_bound: NONCONTEXTUAL_CHI_BOUND,
            violated_abs: omega_abs > CLASSICAL_BOUND,
            violated_signed: omega_signed > CLASSICAL_BOUND,
        }
    }

    pub fn s(&self, variant: Variant) -> f64 {
        match variant {
            Variant::Abs => self.s_abs,
            Variant::Signed => self.s_signed,
        }
    }

    pub fn omega(&self, variant: Variant) -> f64 {
        match variant {
            Variant::Abs => self.omega_abs,
            Variant::Signed => self.omega_signed,
        }
    }

    pub fn violated(&self, variant: Variant) -> bool {
        match variant {
            Variant::Abs => self.violated_abs,
            Variant::Signed => self.violated_signed,
        }
    }
}

fn require_four(rho: &DensityState) -> Result<()> {
    if rho.n_qubits() != 4 {
        return Err(Error::Dimension {
            left: 4,
            right: rho.n_qubits(),
        });
    }
    Ok(())
}

/// The six sequence products from exact distributions.
pub fn evaluate_chi(rho: &DensityState) -> Result<ChiTerms> {
    require_four(rho)?;
    let mut out = [0.0; 6];
    for s in AliceSequence::ALL {
        let dist = sequence_distribution(rho, SequenceSpec::alice_only(s))?;
        out[s.index()] = product_expectation(&dist);
    }
    Ok(ChiTerms(out))
}

/// The twelve conditional correlators and their sum under `variant`.
pub fn evaluate_s(rho: &DensityState, variant: Variant) -> Result<(STerms, f64)> {
    let terms = s_terms(rho)?;
    Ok((terms, terms.sum(variant)))
}

fn s_terms(rho: &DensityState) -> Result<STerms> {
    require_four(rho)?;
    let mut out = [0.0; 12];
    for (slot, t) in out.iter_mut().zip(S_TERMS) {
        let dist = sequence_distribution(rho, t.spec())?;
        *slot = conditional_pair_expectation(&dist, t.position())?;
    }
    Ok(STerms(out))
}

/// Full χ/S/ω report for `rho`.
pub fn omega(rho: &DensityState) -> Result<InequalityReport> {
    Ok(InequalityReport::from_terms(
        evaluate_chi(rho)?,
        s_terms(rho)?,
    ))
}

/// Report for the two-singlet state at visibility `v`.
pub fn omega_at(v: Visibility) -> Result<InequalityReport> {
    omega(&four_qubit_state(v))
}

/// Smallest visibility for which ω exceeds 16, given an observed χ:
/// `(√(33 − 2χ) − 1)/4`.
pub fn visibility_threshold(chi_expt: f64) -> Result<f64> {
    if !(-6.0..=6.0).contains(&chi_expt) {
        return Err(Error::Domain {
            what: "chi",
            value: chi_expt,
            range: "[-6, 6]",
        });
    }
    Ok(0.25 * (libm::sqrt(33.0 - 2.0 * chi_expt) - 1.0))
}

/// `F = ½√(3V + 1)`
pub fn fidelity_from_visibility(v: f64) -> Result<f64> {
    let v = Visibility::new(v)?;
    Ok(0.5 * libm::sqrt(3.0 * v.get() + 1.0))
}

/// Evenly spaced visibilities `start, start + step, …` up to `stop`
/// (included when it lands on the grid within `1e-9·step`).
pub fn visibility_grid(start: f64, stop: f64, step: f64) -> Result<Vec<Visibility>> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::Domain {
            what: "step",
            value: step,
            range: "(0, 1]",
        });
    }
    Visibility::new(start)?;
    Visibility::new(stop)?;
    if stop < start {
        return Err(Error::Domain {
            what: "stop",
            value: stop,
            range: ">= start",
        });
    }
    let n = libm::floor((stop - start) / step + 1e-9) as usize;
    (0..=n)
        .map(|i| Visibility::new((start + i as f64 * step).min(stop)))
        .collect()
}

/// One row of a visibility sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub visibility: f64,
    pub chi: f64,
    pub s: f64,
    pub omega: f64,
}

/// Exact χ, S, ω at every grid point.
pub fn sweep(grid: &[Visibility], variant: Variant) -> Result<Vec<SweepRow>> {
    grid.iter().map(|&v| sweep_point(v, variant)).collect()
}

pub fn sweep_point(v: Visibility, variant: Variant) -> Result<SweepRow> {
    let r = omega_at(v)?;
    Ok(SweepRow {
        visibility: v.get(),
        chi: r.chi,
        s: r.s(variant),
        omega: r.omega(variant),
    })
}

/// First adjacent pair of rows with `ω_i < target ≤ ω_{i+1}`.
pub fn bracket_crossing(rows: &[SweepRow], target: f64) -> Option<(f64, f64)> {
    rows.windows(2)
        .find(|w| w[0].omega < target && w[1].omega >= target)
        .map(|w| (w[0].visibility, w[1].visibility))
}

/// Bisects the engine's ω on `[lo, hi]` down to `tol` in `V`.
pub fn refine_crossing(lo: f64, hi: f64, variant: Variant, target: f64, tol: f64) -> Result<f64> {
    let f = |v: f64| -> Result<f64> { Ok(omega_at(Visibility::new(v)?)?.omega(variant) - target) };
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Domain {
            what: "bracket",
            value: lo,
            range: "must straddle the target",
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
