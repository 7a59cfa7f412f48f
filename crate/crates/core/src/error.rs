use thiserror::Error;

/// Errors raised by the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands live in different variable contexts")]
    ContextMismatch,

    #[error("negative exponent on non-invertible variable `{0}`")]
    NotInvertible(String),

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("substitution image of `{0}` must be a single invertible monomial")]
    NonMonomialImage(String),

    #[error("invalid variable context: {0}")]
    InvalidContext(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("eta undefined: delta_{0} vanishes on every generator")]
    EtaUndefined(usize),

    #[error("inconsistent eta for index {index}: {detail}")]
    EtaInconsistent { index: usize, detail: String },

    #[error("series for index {index} did not truncate within {bound} iterations")]
    NotNilpotent { index: usize, bound: usize },

    #[error("element is not invertible in this fraction field")]
    NoInverse,

    #[error("compatibility relation violated: {0}")]
    Compatibility(String),

    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
