use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("inconsistent code: {0}")]
    InconsistentCode(String),

    #[error("redundant generators: {0}")]
    RedundantGenerators(String),

    #[error("unknown builtin code {0:?}")]
    UnknownCode(String),

    /// An enumeration would exceed its work bound.
    #[error("{what} needs {required} enumeration steps, limit is {limit}")]
    Infeasible {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid fault assignment: {0}")]
    InvalidFault(String),

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("too many qubits for the statevector simulator: {0} (limit 12)")]
    TooManyQubits(usize),

    #[error("cannot read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
