//! Simulation and verification kernel for a Bell test built from local
//! contextuality.
//!
//! Alice holds qubits 1 and 2 and measures one of six sequences of three
//! compatible two-qubit Pauli observables taken from the Mermin–Peres square.
//! Bob holds qubits 3 and 4 and measures one partner observable. The four
//! qubits start in two singlets, on pairs (1,3) and (2,4), optionally mixed
//! with white noise.
//!
//! The crate provides:
//!
//! * [`pauli`]: exact signed Pauli strings and the fifteen named observables.
//! * [`state`]: dense density operators, Werner pairs, expectation values and
//!   Lüders updates.
//! * [`sequence`]: exact joint outcome distributions of the measurement
//!   sequences and a seekable, seeded shot sampler.
//! * [`inequality`]: the χ, S and ω combinations, visibility thresholds and
//!   sweeps.
//! * [`hv`]: exhaustive enumeration of deterministic hidden-variable models.
//!
//! The crate is `no_std` and only needs `alloc`. Threading, file formats and
//! the command-line front end live in the `ctxbell` crate.
#![no_std]

extern crate alloc;

mod error;
pub mod hv;
pub mod inequality;
pub mod pauli;
pub mod sequence;
pub mod state;

pub use error::{Error, Result};
pub use hv::{BoundResult, HvModel, ModelClass, NoncontextualAssignment};
pub use inequality::{ChiTerms, InequalityReport, STerms, Variant};
pub use pauli::{Observable, PauliString, Phase};
pub use sequence::{AliceSequence, OutcomeDistribution, SequenceSpec, ShotRecord};
pub use state::{DensityState, Visibility};
