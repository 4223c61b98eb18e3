//! Dense density operators on a handful of qubits.
//!
//! Matrices use the same ordering as [`PauliString::to_matrix`]: qubit 1 is
//! the most significant tensor factor. Pauli observables are never expanded
//! into dense matrices here; they act on rows and columns as signed
//! permutations.

use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::pauli::{PauliString, DENSE_QUBIT_CAP};
use crate::{Error, Result};

pub const TRACE_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
/// Branches below this probability are reported as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Mixing weight of a singlet against white noise.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Visibility(f64);

impl Visibility {
    pub const PERFECT: Visibility = Visibility(1.0);

    pub fn new(v: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&v) {
            Ok(Visibility(v))
        } else {
            Err(Error::Domain {
                what: "visibility",
                value: v,
                range: "[0, 1]",
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Visibility {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Visibility::new(v)
    }
}

/// Outcome of a dichotomic measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub const fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn sign(self) -> f64 {
        f64::from(self.value())
    }
}

/// Deviations of a matrix from a valid density operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Physicality {
    pub trace_error: f64,
    pub hermitian_error: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn is_valid(&self) -> bool {
        self.trace_error <= TRACE_TOL
            && self.hermitian_error <= HERMITIAN_TOL
            && self.min_eigenvalue >= -PSD_TOL
    }
}

/// Result of one projective (Lüders) measurement branch.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub probability: f64,
    /// `None` when the probability is below [`ZERO_PROBABILITY`].
    pub state: Option<DensityState>,
}

/// `2ⁿ × 2ⁿ` density operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    n_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityState {
    /// Wraps a matrix after checking trace, Hermiticity and positivity.
    pub fn from_matrix(n_qubits: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > DENSE_QUBIT_CAP {
            return Err(Error::Size {
                n_qubits,
                cap: DENSE_QUBIT_CAP,
            });
        }
        let dim = 1usize << n_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension {
                left: dim,
                right: matrix.nrows(),
            });
        }
        if let Some(bad) = matrix
            .iter()
            .find(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::Domain {
                what: "matrix entry",
                value: if bad.re.is_finite() { bad.im } else { bad.re },
                range: "finite",
            });
        }
        let state = DensityState { n_qubits, matrix };
        let phys = state.physicality();
        if phys.hermitian_error > HERMITIAN_TOL {
            return Err(Error::NotHermitian);
        }
        if phys.trace_error > TRACE_TOL {
            return Err(Error::Domain {
                what: "trace",
                value: state.trace(),
                range: "1 ± 1e-10",
            });
        }
        if phys.min_eigenvalue < -PSD_TOL {
            return Err(Error::Domain {
                what: "minimum eigenvalue",
                value: phys.min_eigenvalue,
                range: ">= -1e-9",
            });
        }
        Ok(state)
    }

    /// `|ψ⟩⟨ψ|` for a normalized amplitude vector.
    pub fn from_pure(n_qubits: usize, amplitudes: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        let m = &v * v.adjoint();
        Self::from_matrix(n_qubits, m)
    }

    /// `𝟙 / 2ⁿ`
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits.min(DENSE_QUBIT_CAP);
        let m = DMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Self::from_matrix(n_qubits, m)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(ρ²)`
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn physicality(&self) -> Physicality {
        let hermitian_error = (&self.matrix - self.matrix.adjoint())
            .iter()
            .fold(0.0f64, |m, v| m.max(v.norm()));
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let min_eigenvalue = eig
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        Physicality {
            trace_error: libm::fabs(self.matrix.trace().re - 1.0)
                + libm::fabs(self.matrix.trace().im),
            hermitian_error,
            min_eigenvalue,
        }
    }

    /// `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &DensityState) -> Result<DensityState> {
        let n = self.n_qubits + other.n_qubits;
        if n > DENSE_QUBIT_CAP {
            return Err(Error::Size {
                n_qubits: n,
                cap: DENSE_QUBIT_CAP,
            });
        }
        Ok(DensityState {
            n_qubits: n,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Reorders tensor factors: output qubit `i + 1` is input qubit
    /// `order[i]` (all 1-based).
    pub fn permute_qubits(&self, order: &[usize]) -> Result<DensityState> {
        let n = self.n_qubits;
        let mut seen = 0u64;
        for &q in order {
            if q == 0 || q > n || seen & (1 << q) != 0 {
                return Err(Error::QubitSubset);
            }
            seen |= 1 << q;
        }
        if order.len() != n {
            return Err(Error::QubitSubset);
        }
        // Output basis bit for output qubit i sits at position n-1-i; it
        // carries input qubit order[i], which sits at position n-order[i].
        let map = |out: usize| -> usize {
            order.iter().enumerate().fold(0usize, |acc, (i, &q)| {
                let bit = (out >> (n - 1 - i)) & 1;
                acc | (bit << (n - q))
            })
        };
        let dim = self.dim();
        let src: Vec<usize> = (0..dim).map(map).collect();
        Ok(DensityState {
            n_qubits: n,
            matrix: DMatrix::from_fn(dim, dim, |r, c| self.matrix[(src[r], src[c])]),
        })
    }

    fn check_observable(&self, obs: &PauliString) -> Result<()> {
        if obs.n_qubits() != self.n_qubits {
            return Err(Error::Dimension {
                left: self.n_qubits,
                right: obs.n_qubits(),
            });
        }
        if !obs.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        Ok(())
    }

    /// `tr(ρ·P)` for a Hermitian Pauli string.
    pub fn expectation(&self, obs: &PauliString) -> Result<f64> {
        self.check_observable(obs)?;
        Ok(self.raw_expectation(obs).re)
    }

    fn raw_expectation(&self, obs: &PauliString) -> Complex64 {
        (0..self.dim())
            .map(|a| {
                let (b, c) = obs.act_on_basis(a);
                self.matrix[(a, b)] * c
            })
            .sum()
    }

    /// `P·ρ`
    fn left_pauli(&self, obs: &PauliString) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut out = DMatrix::from_element(dim, dim, ZERO);
        for k in 0..dim {
            let (r, c) = obs.act_on_basis(k);
            for col in 0..dim {
                out[(r, col)] = c * self.matrix[(k, col)];
            }
        }
        out
    }

    /// `ρ·P`
    fn right_pauli(m: &DMatrix<Complex64>, obs: &PauliString) -> DMatrix<Complex64> {
        let dim = m.nrows();
        let mut out = DMatrix::from_element(dim, dim, ZERO);
        for col in 0..dim {
            let (src, c) = obs.act_on_basis(col);
            for row in 0..dim {
                out[(row, col)] = m[(row, src)] * c;
            }
        }
        out
    }

    /// Probability of `outcome` when measuring `obs`.
    pub fn outcome_probability(&self, obs: &PauliString, outcome: Outcome) -> Result<f64> {
        self.check_observable(obs)?;
        Ok(0.5 * (1.0 + outcome.sign() * self.raw_expectation(obs).re))
    }

    /// Lüders update with projector `Π = (𝟙 ± P)/2`.
    pub fn luders_update(&self, obs: &PauliString, outcome: Outcome) -> Result<Branch> {
        let probability = self.outcome_probability(obs, outcome)?;
        if probability < ZERO_PROBABILITY {
            return Ok(Branch {
                probability: 0.0,
                state: None,
            });
        }
        // ΠρΠ = (ρ ± Pρ ± ρP + PρP) / 4
        let s = Complex64::new(outcome.sign(), 0.0);
        let p_rho = self.left_pauli(obs);
        let rho_p = Self::right_pauli(&self.matrix, obs);
        let p_rho_p = Self::right_pauli(&p_rho, obs);
        let scale = Complex64::new(0.25 / probability, 0.0);
        let matrix = (&self.matrix + (p_rho + rho_p) * s + p_rho_p) * scale;
        Ok(Branch {
            probability,
            state: Some(DensityState {
                n_qubits: self.n_qubits,
                matrix,
            }),
        })
    }

    /// Reduced state on `keep` (1-based qubits); the result lists the kept
    /// qubits in ascending order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityState> {
        let n = self.n_qubits;
        let mut keep_mask = 0u64;
        for &q in keep {
            if q == 0 || q > n || keep_mask & (1 << (q - 1)) != 0 {
                return Err(Error::QubitSubset);
            }
            keep_mask |= 1 << (q - 1);
        }
        if keep.is_empty() {
            return Err(Error::QubitSubset);
        }
        // Basis-bit positions of kept and traced qubits, most significant first.
        let positions = |kept: bool| -> Vec<usize> {
            (1..=n)
                .filter(|q| (keep_mask >> (q - 1)) & 1 == u64::from(kept))
                .map(|q| n - q)
                .collect()
        };
        let kept_pos = positions(true);
        let traced_pos = positions(false);
        let scatter = |value: usize, pos: &[usize]| -> usize {
            let k = pos.len();
            pos.iter()
                .enumerate()
                .fold(0, |acc, (i, &p)| acc | (((value >> (k - 1 - i)) & 1) << p))
        };
        let kd = 1usize << kept_pos.len();
        let td = 1usize << traced_pos.len();
        let matrix = DMatrix::from_fn(kd, kd, |r, c| {
            let (rb, cb) = (scatter(r, &kept_pos), scatter(c, &kept_pos));
            (0..td)
                .map(|t| {
                    let tb = scatter(t, &traced_pos);
                    self.matrix[(rb | tb, cb | tb)]
                })
                .sum()
        });
        Ok(DensityState {
            n_qubits: kept_pos.len(),
            matrix,
        })
    }

    /// `V·ρ + (1 − V)·𝟙/2ⁿ`
    pub fn depolarize(&self, v: Visibility) -> DensityState {
        let dim = self.dim();
        let noise = DMatrix::<Complex64>::identity(dim, dim)
            * Complex64::new((1.0 - v.get()) / dim as f64, 0.0);
        DensityState {
            n_qubits: self.n_qubits,
            matrix: &self.matrix * Complex64::new(v.get(), 0.0) + noise,
        }
    }
}

/// `|ψ⁻⟩ = (|01⟩ − |10⟩)/√2` as a density operator.
pub fn singlet_pair() -> DensityState {
    let h = Complex64::new(0.5, 0.0);
    let mut m = DMatrix::from_element(4, 4, ZERO);
    m[(1, 1)] = h;
    m[(2, 2)] = h;
    m[(1, 2)] = -h;
    m[(2, 1)] = -h;
    DensityState {
        n_qubits: 2,
        matrix: m,
    }
}

/// `V|ψ⁻⟩⟨ψ⁻| + (1 − V)𝟙/4`
pub fn werner_pair(v: Visibility) -> DensityState {
    singlet_pair().depolarize(v)
}

/// Werner pairs on qubits (1,3) and (2,4), noise applied per pair.
pub fn four_qubit_state(v: Visibility) -> DensityState {
    let pair = werner_pair(v);
    // Factor order after the tensor product is (1,3,2,4).
    let product = pair.tensor(&pair).expect("four qubits fit under the cap");
    product
        .permute_qubits(&[1, 3, 2, 4])
        .expect("valid permutation")
}
