use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Variants are grouped by how a caller is expected to react: input
/// problems (`Pole`, `Domain`, `Region`, `SectorViolation`) are usage
/// errors, the rest are numerical failures.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("input {what} sits on a pole at {location}")]
    Pole { what: &'static str, location: String },

    #[error("{0}")]
    Domain(String),

    #[error("method {method} used outside its validity region: {reason}")]
    Region { method: &'static str, reason: String },

    #[error("requested tolerance {tolerance:e} not reached (best estimate {achieved:e})")]
    Accuracy { tolerance: f64, achieved: f64 },

    #[error("rotation angle {angle} outside admissible sector [{lo}, {hi}]")]
    SectorViolation { angle: f64, lo: f64, hi: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("extrapolation did not converge: {0}")]
    Extrapolation(String),

    #[error("contour encloses {found} poles, expected {expected}")]
    ContourCount { found: i64, expected: i64 },

    #[error("truncated expansion did not converge: {0}")]
    Truncation(String),

    #[error("fit rejected: {0}")]
    Fit(String),

    #[error("oracles disagree by {deviation:e} (limit {limit:e})")]
    OracleDisagreement { deviation: f64, limit: f64 },

    #[error("boundary leakage {leakage:e} exceeds {limit:e}")]
    BoundaryLeakage { leakage: f64, limit: f64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the caller's arguments rather than by a
    /// numerical breakdown.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Pole { .. }
                | Error::Domain(_)
                | Error::Region { .. }
                | Error::SectorViolation { .. }
                | Error::Unsupported(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
