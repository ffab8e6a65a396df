use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{what}: argument {value} outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("quadrature on [{lo}, {hi}] did not reach tolerance (error estimate {estimate:e})")]
    Quadrature { lo: f64, hi: f64, estimate: f64 },

    /// An iterative solver stopped without meeting its tolerance.
    /// `best` carries the last iterate when one is meaningful.
    #[error("{context} did not converge (residual {residual:e})")]
    NumericalFailure { context: String, residual: f64, best: Option<Vec<f64>> },

    #[error("invalid input at {path}: {message}")]
    InvalidInput { path: String, message: String },

    #[error("length mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("unsupported identity: {0}")]
    UnsupportedIdentity(String),

    #[error("point lies off the affine hull (distance {distance:e})")]
    OffHull { distance: f64 },
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidInput { path: path.into(), message: message.into() }
    }

    pub(crate) fn numerical(context: impl Into<String>, residual: f64) -> Self {
        Error::NumericalFailure { context: context.into(), residual, best: None }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Quadrature { .. } => "quadrature",
            Error::NumericalFailure { .. } => "numerical_failure",
            Error::InvalidInput { .. } => "invalid_input",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::UnsupportedIdentity(_) => "unsupported_identity",
            Error::OffHull { .. } => "off_hull",
        }
    }

    /// Location of the offending input, when there is one.
    pub fn path(&self) -> Option<&str> {
        match self {
            Error::InvalidInput { path, .. } => Some(path),
            _ => None,
        }
    }

    /// True for failures of an iterative or quadrature routine, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature { .. } | Error::NumericalFailure { .. })
    }
}
