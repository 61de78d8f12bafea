use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid Pauli string {input:?}: {reason}")]
    PauliParse { input: String, reason: String },

    #[error("unsupported qubit count {0} (must be 1..=64)")]
    QubitCount(usize),

    #[error("unknown code {0:?} (known: 913, 923, 933, 513, 713)")]
    UnknownCode(String),

    #[error("code file line {line}: {reason}")]
    CodeFormat { line: usize, reason: String },

    #[error("invalid code {name}: {reason}")]
    InvalidCode { name: String, reason: String },

    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid chain plan: {0}")]
    InvalidPlan(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rate accounting needs a full three-round protocol, round {0} is skipped")]
    SkippedRound(usize),

    #[error("input fidelity {0} is at or below the hashing threshold; efficiency is undefined")]
    BelowHashingThreshold(f64),

    #[error("target fidelity {target} not reachable from {start} within {max_rounds} rounds")]
    Unreachable { start: f64, target: f64, max_rounds: usize },

    #[error("convergence start violates the convergence hypotheses: {0}")]
    Hypothesis(String),

    #[error("curves do not share a common grid")]
    GridMismatch,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
