use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument {z} lies outside the strip |Im z| < {bound}")]
    StripViolation { z: Complex64, bound: f64 },

    #[error("argument {z} is within {distance:e} of the pole {pole}")]
    Pole {
        z: Complex64,
        pole: Complex64,
        distance: f64,
    },

    #[error("continuation factor vanishes near {z}")]
    ZeroCrossing { z: Complex64 },

    #[error("pole {pole} lies within {distance:e} of the integration path")]
    ContourCollision { pole: Complex64, distance: f64 },

    #[error("no separating contour: {0}")]
    NoContour(String),

    #[error("quadrature did not reach tolerance: value {value}, error estimate {error_estimate:e}")]
    Accuracy {
        value: Complex64,
        error_estimate: f64,
    },

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
