use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator vanishes at c = {at}")]
    PoleAtSpecialization { at: String },

    #[error("arity mismatch: expected n = {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("y-variables are not allowed in a localized coordinate function")]
    WrongVariableFamily,

    #[error("the zero operator has no principal symbol")]
    ZeroOperator,

    #[error("odd permutation {perm} cannot be twisted by a non-integer power of the discriminant")]
    OddPermutationUnderFormalTwist { perm: String },

    #[error("symbol is not of spherical form: {detail}")]
    NotSpherical { detail: String },

    #[error("ragged matrix: row {row} has length {found}, expected {expected}")]
    ShapeError {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("negative exponent at byte {offset} is only allowed on `del` and nonzero scalars")]
    IllegalNegativeExponent { offset: usize },

    #[error("expression does not denote a function: {0}")]
    NotAFunction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
