//! Error types shared across the crate, with CLI exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("undeclared symbol `{name}` at offset {offset}")]
    UndeclaredSymbol { name: String, offset: usize },

    #[error("expression is not polynomial in the requested indeterminates: {0}")]
    NonPolynomial(String),

    #[error("unbound symbol `{0}` in numeric evaluation")]
    UnboundSymbol(String),

    #[error("division by zero in numeric evaluation")]
    DivisionByZero,

    #[error("derivative marker `{0}` cannot be evaluated numerically")]
    UnexpandedDerivative(String),

    #[error("equation is linear: no nonlinear term to balance")]
    LinearEquation,

    #[error("no positive integer balance degree exists: {0}")]
    NoBalance(String),

    #[error("no exact solution branch found")]
    NoExactSolution,

    #[error("solver made no progress; stuck equations: {0}")]
    TooHard(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("value outside the exact radical tower: {0}")]
    NotRepresentable(String),

    #[error("no sign change of the derivative on the bracketing interval")]
    NoSignChange,

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line interface.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::UndeclaredSymbol { .. } | Error::InvalidProblem(_) | Error::Io(_) => 3,
            Error::LinearEquation | Error::NoBalance(_) => 4,
            Error::NoExactSolution => 2,
            Error::TooHard(_) => 5,
            _ => 1,
        }
    }
}
