use thiserror::Error;

/// Errors raised by the toolkit. Each variant carries a stable machine code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cone is not pointed")]
    NotPointed,
    #[error("ray {0} lies outside the support of the fan")]
    RayOutsideSupport(String),
    #[error("fan and stratification supports differ")]
    SupportMismatch,
    #[error("initial form of the zero vector is undefined")]
    ZeroVector,
    #[error("unsupported support cone: {0}")]
    UnsupportedSupport(String),
    #[error("chart cone is not smooth; resolve it with a smooth refinement first")]
    NonSmoothChart,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPointed => "NOT_POINTED",
            Error::RayOutsideSupport(_) => "RAY_OUTSIDE_SUPPORT",
            Error::SupportMismatch => "SUPPORT_MISMATCH",
            Error::ZeroVector => "ZERO_VECTOR",
            Error::UnsupportedSupport(_) => "UNSUPPORTED_SUPPORT",
            Error::NonSmoothChart => "NON_SMOOTH_CHART",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::InvalidInput(_) => "INVALID_INPUT",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
