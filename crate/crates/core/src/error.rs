use std::io;

use thiserror::Error;

/// Everything that can go wrong while building, loading or checking a design.
///
/// Failures of a *mathematical property* (a census that is not a partition,
/// an axiom with a counterexample) are report content, not errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeP(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {order} exceeds the configured cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation needs odd characteristic")]
    EvenCharacteristic,
    #[error("q = {0} is not congruent to 3 mod 4")]
    BadResidue(u64),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("{what} needs {needed} units but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("C({n},{r}) = {count} r-sets exceeds the census budget {budget}")]
    RsetSpaceTooLarge {
        n: usize,
        r: usize,
        count: u128,
        budget: u128,
    },
    #[error("cannot derive a link of a design with uniformity {0}")]
    UniformityUnderflow(usize),
    #[error("expected uniformity {expected}, got {got}")]
    WrongUniformity { expected: usize, got: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("block {block}: {msg}")]
    InvariantViolation { block: usize, msg: String },
    #[error("blocks have unequal sizes")]
    UnequalBlockSizes,
    #[error("m * C(k, r) = {lhs} but C(n, r) = {rhs}")]
    CardinalityMismatch { lhs: u128, rhs: u128 },
    #[error("sequence is not nondecreasing")]
    NotMonotone,
    #[error("design is not a packing ({multicovered} r-sets covered more than once)")]
    NotAPacking { multicovered: u64 },
    #[error("construction failed its self-check: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
