use thiserror::Error;

/// Failures reported by the library. Every variant carries enough text to be
/// rendered as a machine-readable diagnostic by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator factor {factor} has degree {degree} in k")]
    NonLinearDenominator { factor: String, degree: usize },
    #[error("{0} is not a root of the denominator")]
    NotARoot(String),
    #[error("denominator is not squarefree in k")]
    NotSquarefree,
    #[error("division by the zero operator")]
    DivisionByZeroOperator,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("argument at position {pos} is not an integer-linear form: {arg}")]
    NonIntegerLinearArgument { pos: usize, arg: String },
    #[error("term is identically zero")]
    ZeroTerm,
    #[error("not a hypergeometric term: {0}")]
    NotHypergeometric(String),
    #[error("shift quotients are not compatible")]
    IncompatibleQuotients,
    #[error("term does not match the residue profile: {0}")]
    MismatchedTerm(String),
    #[error("points do not lie in one integer orbit: {0}")]
    BadOrbit(String),
    #[error("factor {0} is not integer-linear")]
    NotIntegerLinear(String),
    #[error("no telescoper: {0}")]
    NoTelescoper(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("basis is not stable under the shift in n: {0}")]
    NotStable(String),
    #[error("spectrum is not rational: {0}")]
    NonRationalSpectrum(String),
    #[error("no operator found up to order {0}")]
    NoOperatorFound(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
