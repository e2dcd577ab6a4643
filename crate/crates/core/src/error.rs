//! Crate-wide error type.

/// Errors shared by all calculator modules.
///
/// The CLI maps these onto exit codes: parse and rejected-input errors are
/// usage errors, invariant violations signal an internal inconsistency.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Two polynomials live over different variable sets.
    #[error("variable set mismatch: [{0}] vs [{1}]")]
    VariableMismatch(String, String),

    /// A variable name not present in the polynomial's variable set.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    /// An evaluation point missing an assignment for some variable.
    #[error("missing assignment for variable `{0}`")]
    MissingAssignment(String),

    /// Input outside the operation's domain.
    #[error("rejected input: {0}")]
    RejectedInput(String),

    /// Matrix labels and entries do not describe a morphism of direct sums.
    #[error("ill-formed morphism: {0}")]
    IllFormedMorphism(String),

    /// Exact division requested but the divisor does not divide.
    #[error("inexact division: {0}")]
    Indivisible(String),

    /// gcd of an all-zero family.
    #[error("gcd of all-zero inputs is undefined")]
    UndefinedGcd,

    /// A structural invariant failed to hold.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// The operation is only defined for specific instances.
    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),

    /// The wall equation degenerates (every alpha solves it).
    #[error("degenerate wall: {0}")]
    DegenerateWall(String),

    /// Syntax error in one of the textual input languages.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
