use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("orbital indices are 1-based, got 0")]
    ZeroOrbital,
    #[error("excitation indices must satisfy {expected}, got {got:?}")]
    ExcitationOrder {
        expected: &'static str,
        got: Vec<usize>,
    },
    #[error("invalid UCCSD spec: need 1 <= n_e < n_o, got n_o={n_o}, n_e={n_e}")]
    InvalidUccsd { n_o: usize, n_e: usize },
    #[error("invalid HEA spec: need n >= 2 and P >= 1, got n={n}, P={p}")]
    InvalidHea { n: usize, p: usize },
    #[error("exp(-i theta P) needs a non-identity Pauli string")]
    EmptyPauli,
    #[error("exp(-i theta P) needs a unit-modulus coefficient, got |c| = {0}")]
    NonUnitCoefficient(f64),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("parameter {0} is not used by any gate")]
    UnusedParameter(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("statevector limited to {max} qubits, requested {requested}")]
    TooManyQubits { requested: usize, max: usize },
    #[error("Hamiltonian is not Hermitian: term {term} has coefficient {coeff}")]
    NonHermitian { term: String, coeff: String },
    #[error("parameter {param}: {reason}")]
    NotPauliExponential { param: usize, reason: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
