use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("missing assignment for variable `{0}`")]
    MissingAssignment(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("wrong degree: expected {expected}, got {actual}")]
    WrongDegree { expected: String, actual: String },

    #[error("unsupported characteristic {0}")]
    Characteristic(u32),

    #[error("decomposition identity fails, difference is {difference}")]
    DecompositionMismatch { difference: String },

    #[error("plane is not contained in the variety: restriction {restriction}")]
    PlaneNotContained { restriction: String },

    #[error("direction lies in the span of the plane")]
    DependentDirection,

    #[error("point is not on the hypersurface: value {value}")]
    PointNotOnVariety { value: String },

    #[error("point is singular on the hypersurface")]
    SingularPoint,

    #[error("degenerate incidence at q = {q}: {detail}")]
    DegenerateIncidence { q: String, detail: String },

    #[error("degenerate residual conic at q = {q}: {detail}")]
    DegenerateResidualConic { q: String, detail: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position,
            message: message.into(),
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive(_))
    }

    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::Verification(_)
                | Error::DecompositionMismatch { .. }
                | Error::DegenerateIncidence { .. }
                | Error::DegenerateResidualConic { .. }
        )
    }
}
