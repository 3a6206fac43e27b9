use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spatial axis {0} is out of range (expected 1, 2 or 3)")]
    AxisOutOfRange(usize),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("matrix is not a restricted Lorentz transformation (defect {defect:e})")]
    NotLorentz { defect: f64 },
    #[error("double cone radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("invalid test function: {0}")]
    InvalidTag(String),
    #[error("face index {index} out of range for a {dim}-simplex")]
    FaceOutOfRange { index: usize, dim: usize },
    #[error("operation not supported for dimension {0}")]
    UnsupportedDimension(usize),
    #[error("chain dimension mismatch: {expected} vs {found}")]
    ChainDimension { expected: usize, found: usize },
    #[error("quadrature order must be at least {min}, got {found}")]
    QuadratureOrder { min: usize, found: usize },
    #[error("path endpoints do not match")]
    EndpointMismatch,
    #[error("test function tags differ")]
    TagMismatch,
    #[error("empty word where a path was expected")]
    EmptyPath,
    #[error("word is not a loop")]
    NotALoop,
    #[error("value dimension mismatch")]
    DimensionMismatch,
    #[error("path frame undefined: {0}")]
    FrameUndefined(String),
    #[error(
        "region needs {needed} tensor factors of dimension {dim}, exceeding total dimension {max}"
    )]
    RegionTooLarge {
        needed: usize,
        dim: usize,
        max: usize,
    },
    #[error("invalid field model: {0}")]
    InvalidModel(String),
    #[error("no analytic convolution for {model} with a {tag} test function")]
    UnsupportedSmearing {
        model: &'static str,
        tag: &'static str,
    },
    #[error("empty curve")]
    EmptyCurve,
    #[error("chains have different boundaries")]
    BoundaryMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
