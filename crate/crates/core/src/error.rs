//! Crate-wide error type.

use std::fmt;

/// Errors produced by construction, arithmetic and solver routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Division by the zero scalar.
    DivisionByZero,
    /// Inverse of an algebraic element failed; the named minimal polynomial is reducible.
    NonInvertible { constant: String },
    /// A constant appears under the t-derivation without a declared derivative.
    UndeclaredDerivative { constant: String },
    /// Operands belong to different presentations.
    MixedPresentations,
    /// A nonzero exponent vector was required.
    ZeroExponentVector,
    /// A rewrite rule violates the termination order.
    Termination { rule: String, offending_word: String },
    /// Construction-time validation failed (with a path into the offending field).
    Validation { path: String, message: String },
    /// Document or expression syntax error.
    Parse { context: String, message: String },
    /// A resource cap was exceeded.
    CapExceeded { cap: usize, needed: usize },
    /// Operation not available for this presentation kind or mode.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NonInvertible { constant } => write!(
                f,
                "element is not invertible: minimal polynomial of `{constant}` is reducible"
            ),
            Error::UndeclaredDerivative { constant } => {
                write!(f, "constant `{constant}` has no declared t-derivative")
            }
            Error::MixedPresentations => write!(f, "operands come from different presentations"),
            Error::ZeroExponentVector => write!(f, "exponent vector must be nonzero"),
            Error::Termination { rule, offending_word } => write!(
                f,
                "rule `{rule}` breaks the termination order: word `{offending_word}` is not smaller than the left-hand side"
            ),
            Error::Validation { path, message } => write!(f, "invalid `{path}`: {message}"),
            Error::Parse { context, message } => write!(f, "parse error in {context}: {message}"),
            Error::CapExceeded { cap, needed } => {
                write!(f, "resource cap exceeded: needed {needed}, cap {cap}")
            }
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
