use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("residue {residue} out of range for modulus {n}")]
    ResidueOutOfRange { residue: usize, n: usize },

    #[error("duplicate residue {0} in set literal")]
    DuplicateResidue(usize),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    #[error("{t} does not divide {n}")]
    NotADivisor { n: usize, t: usize },

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("subgroup size {0} is below 3")]
    SubgroupTooSmall(usize),

    #[error("modulus {n} exceeds the oracle cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("node budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("enumeration limit {limit} exceeded ({collected} colorings collected so far)")]
    EnumerationOverflow { limit: usize, collected: usize },

    #[error("malformed coloring: {0}")]
    MalformedColoring(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
