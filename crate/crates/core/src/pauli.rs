//! Signed Pauli strings and the named observables of the experiment.
//!
//! A [`PauliString`] on `n` qubits is stored as `i^k · ⊗_q X^{x_q} Z^{z_q}`:
//! two bit masks and an exponent `k ∈ {0,1,2,3}`. Bit `q` of each mask
//! belongs to qubit `q + 1`. A single-qubit `Y` is `i·XZ`, so `y₁y₂` has
//! both masks set on qubits 1 and 2 and exponent 2.
//!
//! In the dense realization qubit 1 is the most significant tensor factor:
//! the computational basis index of `|b₁ b₂ … bₙ⟩` is `b₁ 2^{n-1} + … + bₙ`.

use core::fmt;
use core::str::FromStr;

use alloc::string::ToString;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::sequence::AliceSequence;
use crate::{Error, Result};

/// Largest qubit count [`PauliString::to_matrix`] will realize densely.
pub const DENSE_QUBIT_CAP: usize = 6;

/// A power of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub const fn from_exponent(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    pub const fn exponent(self) -> u8 {
        self.0
    }

    pub const fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub const fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    /// `Some(±1)` for a real phase.
    pub const fn real_sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })
    }
}

/// One of the four single-qubit Pauli letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

/// Signed tensor product of Pauli operators, `i^k · ⊗ X^x Z^z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: u8,
    x: u64,
    z: u64,
    phase: Phase,
}

#[inline]
fn parity(v: u64) -> u32 {
    v.count_ones() & 1
}

impl PauliString {
    /// Builds a string from raw masks; bits above `n_qubits` are rejected.
    pub fn from_masks(n_qubits: usize, x: u64, z: u64, phase: Phase) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 64 {
            return Err(Error::Size { n_qubits, cap: 64 });
        }
        let valid = if n_qubits == 64 {
            u64::MAX
        } else {
            (1u64 << n_qubits) - 1
        };
        if (x | z) & !valid != 0 {
            return Err(Error::QubitSubset);
        }
        Ok(PauliString {
            n_qubits: n_qubits as u8,
            x,
            z,
            phase,
        })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_masks(n_qubits, 0, 0, Phase::ONE)
    }

    /// Single Pauli letter on qubit `qubit` (1-based).
    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> Result<Self> {
        if qubit == 0 || qubit > n_qubits {
            return Err(Error::QubitSubset);
        }
        let bit = 1u64 << (qubit - 1);
        let (x, z, phase) = match letter {
            Letter::I => (0, 0, Phase::ONE),
            Letter::X => (bit, 0, Phase::ONE),
            Letter::Z => (0, bit, Phase::ONE),
            Letter::Y => (bit, bit, Phase::I),
        };
        Self::from_masks(n_qubits, x, z, phase)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Phase of the `X^x Z^z` form (a `Y` contributes a factor `i`).
    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Qubits (as a mask) on which the string acts non-trivially.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// The scalar `c` when the string equals `c·𝟙`.
    pub fn identity_coefficient(&self) -> Option<Phase> {
        self.is_identity().then_some(self.phase)
    }

    /// Phase relative to the letter form written with `I, X, Y, Z`.
    pub fn letter_phase(&self) -> Phase {
        let y_count = (self.x & self.z).count_ones();
        self.phase.mul(Phase::from_exponent(4 - (y_count % 4)))
    }

    /// `Some(±1)` when the string is Hermitian, i.e. an observable with
    /// eigenvalues `±1`.
    pub fn sign(&self) -> Option<i8> {
        self.letter_phase().real_sign()
    }

    pub fn is_hermitian(&self) -> bool {
        self.sign().is_some()
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        let bit = 1u64 << (qubit - 1);
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (false, true) => Letter::Z,
            (true, true) => Letter::Y,
        }
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                left: self.n_qubits(),
                right: other.n_qubits(),
            });
        }
        Ok(())
    }

    /// Group product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dims(rhs)?;
        // Z^z1 X^x2 = (-1)^{|z1 ∧ x2|} X^x2 Z^z1
        let swap = 2 * parity(self.z & rhs.x);
        Ok(PauliString {
            n_qubits: self.n_qubits,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            phase: self.phase.mul(rhs.phase).mul(Phase::from_exponent(swap)),
        })
    }

    /// Product of a non-empty slice, left to right.
    pub fn product(strings: &[PauliString]) -> Result<Self> {
        let (first, rest) = strings.split_first().ok_or(Error::QubitSubset)?;
        rest.iter().try_fold(*first, |acc, p| acc.mul(p))
    }

    /// True iff the symplectic inner product of the masks is even.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_dims(other)?;
        Ok(parity(self.x & other.z) == parity(self.z & other.x))
    }

    pub fn neg(&self) -> Self {
        PauliString {
            phase: self.phase.mul(Phase::MINUS_ONE),
            ..*self
        }
    }

    /// Masks re-indexed to computational basis bit positions.
    pub(crate) fn basis_masks(&self) -> (usize, usize) {
        let n = self.n_qubits as u32;
        let rev = |m: u64| -> usize { (m.reverse_bits() >> (64 - n)) as usize };
        (rev(self.x), rev(self.z))
    }

    /// `P|j⟩ = c_j |j ⊕ x⟩`; returns `(j ⊕ x, c_j)`.
    #[inline]
    pub(crate) fn act_on_basis(&self, j: usize) -> (usize, Complex64) {
        let (xb, zb) = self.basis_masks();
        let mut phase = self.phase;
        if (zb & j).count_ones() & 1 == 1 {
            phase = phase.mul(Phase::MINUS_ONE);
        }
        (j ^ xb, phase.to_complex())
    }

    /// Dense `2ⁿ × 2ⁿ` matrix, qubit 1 most significant.
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.to_matrix_with_cap(DENSE_QUBIT_CAP)
    }

    pub fn to_matrix_with_cap(&self, cap: usize) -> Result<DMatrix<Complex64>> {
        if self.n_qubits() > cap {
            return Err(Error::Size {
                n_qubits: self.n_qubits(),
                cap,
            });
        }
        let dim = 1usize << self.n_qubits;
        let (xb, zb) = self.basis_masks();
        let base = self.phase.to_complex();
        Ok(DMatrix::from_fn(dim, dim, |row, col| {
            if row != col ^ xb {
                Complex64::new(0.0, 0.0)
            } else if (zb & col).count_ones() & 1 == 1 {
                -base
            } else {
                base
            }
        }))
    }
}

impl fmt::Display for PauliString {
    /// Letter form, e.g. `+YYII`, `-iY`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter_phase())?;
        for q in 1..=self.n_qubits() {
            let c = match self.letter(q) {
                Letter::I => 'I',
                Letter::X => 'X',
                Letter::Y => 'Y',
                Letter::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses the letter form produced by `Display`. The sign prefix is
    /// optional: `+`, `-`, `+i`, `-i` or `i`.
    fn from_str(s: &str) -> Result<Self> {
        let (phase, letters) = if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix("+i").or_else(|| s.strip_prefix('i')) {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else {
            (Phase::ONE, s.strip_prefix('+').unwrap_or(s))
        };
        let n = letters.chars().count();
        let mut acc = PauliString::identity(n).map_err(|_| Error::UnknownLabel(s.to_string()))?;
        acc.phase = phase;
        for (i, c) in letters.chars().enumerate() {
            let letter = match c {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                _ => return Err(Error::UnknownLabel(s.to_string())),
            };
            acc = acc.mul(&PauliString::single(n, i + 1, letter)?)?;
        }
        Ok(acc)
    }
}

/// Which side of the experiment an observable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
}

/// The fifteen named four-qubit observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    /// `A = z₁`
    A,
    /// `B = z₂`
    B,
    /// `C = z₁z₂`
    C,
    /// `a = x₂`
    LowerA,
    /// `b = x₁`
    LowerB,
    /// `c = x₁x₂`
    LowerC,
    /// `α = z₁x₂`
    Alpha,
    /// `β = x₁z₂`
    Beta,
    /// `γ = y₁y₂`
    Gamma,
    /// `B' = z₄`
    BPrime,
    /// `C' = z₃z₄`
    CPrime,
    /// `a' = x₄`
    LowerAPrime,
    /// `c' = x₃x₄`
    LowerCPrime,
    /// `α' = z₃x₄`
    AlphaPrime,
    /// `β' = x₃z₄`
    BetaPrime,
}

impl Observable {
    pub const ALL: [Observable; 15] = [
        Observable::A,
        Observable::B,
        Observable::C,
        Observable::LowerA,
        Observable::LowerB,
        Observable::LowerC,
        Observable::Alpha,
        Observable::Beta,
        Observable::Gamma,
        Observable::BPrime,
        Observable::CPrime,
        Observable::LowerAPrime,
        Observable::LowerCPrime,
        Observable::AlphaPrime,
        Observable::BetaPrime,
    ];

    pub const ALICE: [Observable; 9] = [
        Observable::A,
        Observable::B,
        Observable::C,
        Observable::LowerA,
        Observable::LowerB,
        Observable::LowerC,
        Observable::Alpha,
        Observable::Beta,
        Observable::Gamma,
    ];

    pub const BOB: [Observable; 6] = [
        Observable::BPrime,
        Observable::CPrime,
        Observable::LowerAPrime,
        Observable::LowerCPrime,
        Observable::AlphaPrime,
        Observable::BetaPrime,
    ];

    pub const fn label(self) -> &'static str {
        use Observable::*;
        match self {
            A => "A",
            B => "B",
            C => "C",
            LowerA => "a",
            LowerB => "b",
            LowerC => "c",
            Alpha => "α",
            Beta => "β",
            Gamma => "γ",
            BPrime => "B'",
            CPrime => "C'",
            LowerAPrime => "a'",
            LowerCPrime => "c'",
            AlphaPrime => "α'",
            BetaPrime => "β'",
        }
    }

    /// Label spelled with ASCII only (`alpha`, `beta'`, ...).
    pub const fn ascii_label(self) -> &'static str {
        use Observable::*;
        match self {
            Alpha => "alpha",
            Beta => "beta",
            Gamma => "gamma",
            AlphaPrime => "alpha'",
            BetaPrime => "beta'",
            other => other.label(),
        }
    }

    /// Definition in single-qubit subscript notation.
    pub const fn definition(self) -> &'static str {
        use Observable::*;
        match self {
            A => "z1",
            B => "z2",
            C => "z1 z2",
            LowerA => "x2",
            LowerB => "x1",
            LowerC => "x1 x2",
            Alpha => "z1 x2",
            Beta => "x1 z2",
            Gamma => "y1 y2",
            BPrime => "z4",
            CPrime => "z3 z4",
            LowerAPrime => "x4",
            LowerCPrime => "x3 x4",
            AlphaPrime => "z3 x4",
            BetaPrime => "x3 z4",
        }
    }

    pub const fn party(self) -> Party {
        match self as u8 {
            0..=8 => Party::Alice,
            _ => Party::Bob,
        }
    }

    /// Bob's perfectly (anti)correlated partner. `A`, `b` and `γ` have none.
    pub const fn partner(self) -> Option<Observable> {
        use Observable::*;
        match self {
            B => Some(BPrime),
            C => Some(CPrime),
            LowerA => Some(LowerAPrime),
            LowerC => Some(LowerCPrime),
            Alpha => Some(AlphaPrime),
            Beta => Some(BetaPrime),
            _ => None,
        }
    }

    /// The four-qubit Pauli string.
    pub fn pauli(self) -> PauliString {
        use Observable::*;
        const Q1: u64 = 1;
        const Q2: u64 = 1 << 1;
        const Q3: u64 = 1 << 2;
        const Q4: u64 = 1 << 3;
        let (x, z, phase) = match self {
            A => (0, Q1, Phase::ONE),
            B => (0, Q2, Phase::ONE),
            C => (0, Q1 | Q2, Phase::ONE),
            LowerA => (Q2, 0, Phase::ONE),
            LowerB => (Q1, 0, Phase::ONE),
            LowerC => (Q1 | Q2, 0, Phase::ONE),
            Alpha => (Q2, Q1, Phase::ONE),
            Beta => (Q1, Q2, Phase::ONE),
            // (i X₁Z₁)(i X₂Z₂)
            Gamma => (Q1 | Q2, Q1 | Q2, Phase::MINUS_ONE),
            BPrime => (0, Q4, Phase::ONE),
            CPrime => (0, Q3 | Q4, Phase::ONE),
            LowerAPrime => (Q4, 0, Phase::ONE),
            LowerCPrime => (Q3 | Q4, 0, Phase::ONE),
            AlphaPrime => (Q4, Q3, Phase::ONE),
            BetaPrime => (Q3, Q4, Phase::ONE),
        };
        PauliString {
            n_qubits: 4,
            x,
            z,
            phase,
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.label() == s || o.ascii_label() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// Alice's nine observables laid out so that every row and column is a
/// commuting triple; only the last column multiplies to `-𝟙`.
pub const MERMIN_SQUARE: [[Observable; 3]; 3] = [
    [Observable::A, Observable::B, Observable::C],
    [Observable::LowerA, Observable::LowerB, Observable::LowerC],
    [Observable::Alpha, Observable::Beta, Observable::Gamma],
];

/// Product of one measurement sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequenceProduct {
    pub sequence: AliceSequence,
    /// `±1` such that the ordered triple product equals `coefficient · 𝟙`;
    /// `None` if the product is not a real multiple of the identity.
    pub coefficient: Option<i8>,
    pub pairwise_commuting: bool,
}

/// Identity coefficients of the six sequence products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareCheck {
    pub products: [SequenceProduct; 6],
}

impl SquareCheck {
    pub const EXPECTED: [i8; 6] = [1, 1, 1, 1, 1, -1];

    pub fn coefficients(&self) -> [Option<i8>; 6] {
        self.products.map(|p| p.coefficient)
    }

    /// Coefficients summed with the χ sign pattern.
    pub fn chi_sum(&self) -> Option<i32> {
        self.products.iter().try_fold(0i32, |acc, p| {
            Some(acc + i32::from(p.sequence.chi_sign()) * i32::from(p.coefficient?))
        })
    }

    pub fn passed(&self) -> bool {
        self.products.iter().all(|p| p.pairwise_commuting)
            && self.coefficients() == Self::EXPECTED.map(Some)
    }
}

/// Multiplies out every sequence symbolically.
pub fn mermin_square_check() -> SquareCheck {
    let products = AliceSequence::ALL.map(|sequence| {
        let ops = sequence.observables().map(Observable::pauli);
        // Same qubit count everywhere, so the algebra cannot fail here.
        let product = PauliString::product(&ops).expect("four-qubit strings");
        let pairwise_commuting = (0..3)
            .all(|i| (i + 1..3).all(|j| ops[i].commutes(&ops[j]).expect("four-qubit strings")));
        SequenceProduct {
            sequence,
            coefficient: product.identity_coefficient().and_then(Phase::real_sign),
            pairwise_commuting,
        }
    });
    SquareCheck { products }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec::Vec;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = p("X");
        let z = p("Z");
        let prod = x.mul(&z).unwrap();
        assert_eq!(prod, p("-iY"));
        assert_eq!(format!("{prod}"), "-iY");
        assert!(!prod.is_hermitian());
    }

    #[test]
    fn abc_is_identity_and_gamma_c_c_is_minus_identity() {
        use Observable::*;
        let abc = PauliString::product(&[A.pauli(), B.pauli(), C.pauli()]).unwrap();
        assert_eq!(abc, PauliString::identity(4).unwrap());
        let gcc = PauliString::product(&[Gamma.pauli(), LowerC.pauli(), C.pauli()]).unwrap();
        assert_eq!(gcc, PauliString::identity(4).unwrap().neg());
    }

    #[test]
    fn commutation_examples() {
        use Observable::*;
        assert!(A.pauli().commutes(&B.pauli()).unwrap());
        assert!(!A.pauli().commutes(&LowerB.pauli()).unwrap());
        for seq in AliceSequence::ALL {
            let ops = seq.observables().map(Observable::pauli);
            for i in 0..3 {
                for j in 0..3 {
                    assert!(ops[i].commutes(&ops[j]).unwrap(), "{seq:?}");
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = PauliString::identity(2).unwrap();
        let b = PauliString::identity(3).unwrap();
        assert_eq!(a.mul(&b), Err(Error::Dimension { left: 2, right: 3 }));
        assert!(a.commutes(&b).is_err());
    }

    #[test]
    fn size_cap() {
        let big = PauliString::identity(7).unwrap();
        assert!(matches!(
            big.to_matrix(),
            Err(Error::Size {
                n_qubits: 7,
                cap: 6
            })
        ));
        assert!(big.to_matrix_with_cap(7).is_ok());
    }

    #[test]
    fn identity_matrix_on_one_qubit() {
        let m = PauliString::identity(1).unwrap().to_matrix().unwrap();
        assert_eq!(m, DMatrix::identity(2, 2));
    }

    #[test]
    fn gamma_matrix_is_y_y_i_i() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let y = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let i2 = DMatrix::<Complex64>::identity(2, 2);
        let expected = y.kronecker(&y).kronecker(&i2).kronecker(&i2);
        let got = Observable::Gamma.pauli().to_matrix().unwrap();
        assert!((got - expected).iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn abc_matrix_product_is_identity() {
        use Observable::*;
        let m = A.pauli().to_matrix().unwrap()
            * B.pauli().to_matrix().unwrap()
            * C.pauli().to_matrix().unwrap();
        let id = DMatrix::<Complex64>::identity(16, 16);
        assert!((m - id).iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn square_check_pattern() {
        let check = mermin_square_check();
        assert_eq!(check.coefficients(), SquareCheck::EXPECTED.map(Some));
        assert_eq!(check.chi_sum(), Some(6));
        assert!(check.passed());
    }

    #[test]
    fn square_rows_and_columns() {
        let mut minus = 0;
        let lines: Vec<[Observable; 3]> = (0..3)
            .map(|r| MERMIN_SQUARE[r])
            .chain((0..3).map(|c| [0, 1, 2].map(|r| MERMIN_SQUARE[r][c])))
            .collect();
        for line in &lines {
            let ops = line.map(Observable::pauli);
            for a in &ops {
                for b in &ops {
                    assert!(a.commutes(b).unwrap());
                }
            }
            match PauliString::product(&ops).unwrap().identity_coefficient() {
                Some(Phase::ONE) => {}
                Some(Phase::MINUS_ONE) => minus += 1,
                other => panic!("{line:?} -> {other:?}"),
            }
        }
        assert_eq!(minus, 1);
        let last_col = [0, 1, 2]
            .map(|r| MERMIN_SQUARE[r][2])
            .map(Observable::pauli);
        assert_eq!(
            PauliString::product(&last_col)
                .unwrap()
                .identity_coefficient(),
            Some(Phase::MINUS_ONE)
        );
    }

    #[test]
    fn observables_are_hermitian_and_local() {
        for o in Observable::ALL {
            let ps = o.pauli();
            assert_eq!(ps.n_qubits(), 4);
            assert!(ps.is_hermitian(), "{o}");
            assert_eq!(ps.mul(&ps).unwrap(), PauliString::identity(4).unwrap());
            let support = ps.support();
            match o.party() {
                Party::Alice => assert_eq!(support & !0b0011, 0, "{o}"),
                Party::Bob => assert_eq!(support & !0b1100, 0, "{o}"),
            }
            assert_eq!(o.label().parse::<Observable>().unwrap(), o);
            assert_eq!(o.ascii_label().parse::<Observable>().unwrap(), o);
        }
        assert_eq!(format!("{}", Observable::Gamma.pauli()), "+YYII");
        assert_eq!(Observable::Gamma.pauli().phase(), Phase::MINUS_ONE);
    }

    #[test]
    fn symbolic_product_matches_matrix_product_on_named_pairs() {
        for p in Observable::ALL {
            for q in Observable::ALL {
                let sym = p.pauli().mul(&q.pauli()).unwrap().to_matrix().unwrap();
                let dense = p.pauli().to_matrix().unwrap() * q.pauli().to_matrix().unwrap();
                assert!((sym - dense).iter().all(|v| v.norm() < 1e-12), "{p}{q}");
            }
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
        assert!("delta".parse::<Observable>().is_err());
    }
}
