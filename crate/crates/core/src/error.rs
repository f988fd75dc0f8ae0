use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("square root of {0} is not representable in the supported radical ring")]
    RadicalNotRepresentable(String),
    #[error("scalar is not real: {0}")]
    NotReal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pole at point {0}")]
    PoleAtPoint(String),
    #[error("pole at base point")]
    PoleAtBasePoint,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("map is not verified: {0}")]
    NotVerified(String),
    #[error("unitary part of automorphism is not unitary")]
    NonUnitaryU,
    #[error("invalid automorphism parameter: {0}")]
    InvalidAutomorphism(String),
    #[error("degenerate jet: {0}")]
    DegenerateJet(String),
    #[error("map does not send the base point to the origin")]
    NotCentered,
    #[error("constraint violated: {constraint} (value {value})")]
    ConstraintViolation { constraint: String, value: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("map is not in partial normal form: {0}")]
    NotNormalized(String),
    #[error("point is not on the Heisenberg hypersurface: {0}")]
    NotOnHypersurface(String),
    #[error("every candidate point on the Segre variety hits a pole")]
    PoleOnSegre,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("i/o error: {0}")]
    Io(String),
}
