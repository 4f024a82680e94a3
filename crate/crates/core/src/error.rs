use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("axiom `{axiom}` fails at {witness:?}")]
    AxiomViolation { axiom: String, witness: Vec<usize> },

    #[error("malformed tables: {0}")]
    MalformedTables(String),

    #[error("{what} exceeds the configured cap of {limit}")]
    CapExceeded { what: String, limit: usize },

    #[error("verification failed: {0}")]
    VerificationFailure(String),

    #[error("submodule is not fully invariant")]
    NotFullyInvariant,

    #[error("submodule is not proper")]
    NotProper,

    #[error("membership in sigma[M] not certified up to depth {depth}")]
    SigmaMembershipUnverified { depth: usize },

    #[error("Ann_R(M) acts nontrivially: ring element {ring_element} moves element {element}")]
    NotInSigma { ring_element: usize, element: usize },

    #[error("modules are defined over different rings")]
    RingMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn cap(what: impl Into<String>, limit: usize) -> Error {
    Error::CapExceeded { what: what.into(), limit }
}
