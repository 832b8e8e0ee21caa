use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants fall into three groups: input problems (parse / admissibility),
/// precondition violations, and bug signals. A bug signal means an identity
/// that must hold mathematically failed to hold in the computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidType(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("weight {weight:?} is not J-antidominant for J = {j:?}")]
    NotJAntidominant { j: Vec<usize>, weight: Vec<i64> },

    #[error("element is not of length zero (length {0})")]
    NotLengthZero(usize),

    #[error("polynomial is not divisible by X^{root:?} - 1")]
    NotDivisible { root: Vec<i64> },

    #[error("pole at t = {mode} in the coefficient of X^{weight:?}")]
    PoleAtSpecialization { mode: String, weight: Vec<i64> },

    #[error("q-expansion impossible: denominator vanishes at q = 0")]
    QPole,

    #[error("no separating coweight found for {0} weights")]
    EigenvalueCollision(usize),

    #[error("Y maps X^{from:?} outside the lower set (found X^{to:?})")]
    TriangularityViolation { from: Vec<i64>, to: Vec<i64> },

    #[error("the two symmetrizer formulas disagree for weight {0:?}")]
    FormulaMismatch(Vec<i64>),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("leading norm series has zero constant coefficient at step {0}")]
    NonInvertibleLeading(usize),

    #[error("straightening guard exceeded (word length {0})")]
    GuardExceeded(usize),

    #[error("truncation K = {k} too small for requested degree {need}")]
    TruncationTooSmall { k: u32, need: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for errors that can only arise from an internal inconsistency.
    pub fn is_bug_signal(&self) -> bool {
        matches!(
            self,
            Error::NotDivisible { .. }
                | Error::PoleAtSpecialization { .. }
                | Error::QPole
                | Error::EigenvalueCollision(_)
                | Error::TriangularityViolation { .. }
                | Error::FormulaMismatch(_)
                | Error::SingularSystem(_)
                | Error::NonInvertibleLeading(_)
                | Error::GuardExceeded(_)
        )
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidType(_) | Error::Parse(_) => 2,
            Error::NotJAntidominant { .. }
            | Error::NotLengthZero(_)
            | Error::TruncationTooSmall { .. }
            | Error::Unsupported(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
