use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    #[error("{n_qubits} qubits exceeds the dense cap of {cap}")]
    Size { n_qubits: usize, cap: usize },

    #[error("{what} = {value} is outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid qubit subset")]
    QubitSubset,

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("distribution has no Bob outcome")]
    MissingBob,

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("unknown label `{0}`")]
    UnknownLabel(alloc::string::String),
}
