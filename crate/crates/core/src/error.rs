use thiserror::Error;

/// Errors surfaced by the library. Internal-consistency failures use
/// [`Error::Internal`] and indicate a bug, not bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidSpec(String),

    /// The Johnson scheme is only defined for n >= 2k.
    #[error("the Johnson scheme requires n >= 2k, got n={n}, k={k}")]
    SchemePrecondition { n: u64, k: u64 },

    #[error("L must be nonempty for this operation")]
    EmptyL,

    /// The matrix of scheme eigenvalues is singular at this n; retry at larger n.
    #[error("eigenvalue matrix is singular at n={n} for k={k}, L={l:?}")]
    SingularMatrix { n: u64, k: u64, l: Vec<u64> },

    /// The closed-form denominator vanished at this n (small-n regime).
    #[error("closed-form denominator is zero at n={n}, k={k}, l={ell}")]
    ZeroDenominator { n: u64, k: u64, ell: u64 },

    #[error("{q} is not a prime power")]
    NotPrimePower { q: u64 },

    #[error("vertex count {vertices} exceeds cap {cap}")]
    CapExceeded { vertices: u64, cap: u64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
