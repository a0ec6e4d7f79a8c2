use num_bigint::{BigInt, BigUint};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: BigInt, modulus: BigUint },

    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("moduli {0} and {1} are not coprime")]
    ModuliNotCoprime(BigUint, BigUint),

    #[error("no residues to combine")]
    EmptyCombination,

    #[error("factorization of {0} exceeded the iteration bound")]
    FactorizationLimitExceeded(BigUint),

    #[error("Bernoulli index {index} exceeds the cache cap {cap}")]
    IndexCapExceeded { index: usize, cap: usize },

    #[error("denominator {0} is not one of 3, 4, 6")]
    InvalidDenominator(u64),

    #[error("index {0} must be a positive even integer")]
    OddIndex(usize),

    #[error("{a} is not coprime to {n}")]
    NotCoprime { a: i64, n: u64 },

    #[error("{p} does not divide {n}")]
    PrimeDoesNotDivide { p: u64, n: u64 },

    #[error("{0} is even; half sums need an odd modulus")]
    EvenModulus(u64),

    #[error("gcd({n}, {d}) > 1")]
    NotCoprimeToD { n: u64, d: u64 },

    #[error("gcd({0}, 6) > 1")]
    NotCoprimeTo6(u64),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no counterexample for n <= {0}")]
    NoCounterexampleInRange(u64),

    #[error("exact oracle disagrees with the modular path: {0}")]
    OracleDivergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
