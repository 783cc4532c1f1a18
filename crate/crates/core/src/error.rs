use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice size: {0}")]
    InvalidSize(String),
    #[error("vertex index {index} out of range for {num_vertices} vertices")]
    VertexOutOfRange { index: usize, num_vertices: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },
    #[error("unsupported qubit count {0} (1..=64 supported)")]
    UnsupportedWidth(usize),
    #[error("state length {got} does not match 2^{num_qubits}")]
    StateLength { got: usize, num_qubits: usize },
    #[error("invalid Pauli label {0:?}")]
    InvalidLabel(String),
    #[error("operator is not Hermitian")]
    NonHermitian,
    #[error("state is not normalized (norm {0})")]
    Unnormalized(f64),
    #[error("expectation has imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error("{what} requires at most {limit} qubits, got {got}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("lattice has no edges")]
    EmptyLattice,
    #[error("mode {mode} out of range for {num_modes} modes")]
    ModeOutOfRange { mode: usize, num_modes: usize },
    #[error("site {site} out of range for {num_sites} sites")]
    SiteOutOfRange { site: usize, num_sites: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("relative error undefined for expected energy 0")]
    ZeroReference,
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
