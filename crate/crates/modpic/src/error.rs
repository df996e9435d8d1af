//! Crate-wide error type.
//!
//! Every fallible operation returns a structured error; none of the library
//! paths panic on malformed user input. Internal invariant violations (which
//! indicate bugs, not bad input) use `debug_assert!`/`assert!` instead.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The zero polynomial was passed where a nonzero one is required.
    #[error("the zero polynomial is not admissible here")]
    ZeroPolynomial,

    /// A defining polynomial has a repeated factor; the factor is reported
    /// so the caller can fix the input.
    #[error("polynomial is not squarefree: repeated factor {factor}")]
    NotSquarefree { factor: String },

    /// `p` must be an odd prime below `2^31` for the fixed-width residue
    /// arithmetic to be exact.
    #[error("unsupported characteristic {p}: need an odd prime p < 2^31")]
    BadCharacteristic { p: u64 },

    /// The residue characteristic divides the torsion level `n`.
    #[error("characteristic {p} divides n = {n}")]
    CharDividesLevel { p: u64, n: u64 },

    /// The torsion level must divide the degree of the modulus.
    #[error("n = {n} does not divide the modulus degree m = {m}")]
    LevelDegreeMismatch { n: u64, m: u64 },

    /// Mixed working fields or mismatched parent contexts.
    #[error("mismatched contexts: {0}")]
    ContextMismatch(String),

    /// Supports collide where disjointness is required (modulus vs divisor,
    /// auxiliary modulus vs exclusions, ...).
    #[error("support collision: {0}")]
    SupportCollision(String),

    /// A search space was exhausted (e.g. no admissible auxiliary modulus
    /// remains after exclusions).
    #[error("no candidates left: {0}")]
    Exhausted(String),

    /// The zero function has no divisor, order or evaluation.
    #[error("the zero function is not admissible here")]
    ZeroFunction,

    /// Divisor or class fails a degree requirement.
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    /// An element does not lie in the group or torsion subgroup required by
    /// the operation.
    #[error("not in the required group: {0}")]
    NotInGroup(String),

    /// An explicitly budgeted computation ran out of budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Malformed input document (schema or semantic validation).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Feature intentionally out of scope at desk scale.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// I/O failure while reading input or writing a report.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure, with line/column from serde.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
