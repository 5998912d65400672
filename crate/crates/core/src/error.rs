//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The input document is not syntactically valid.
    #[error("parse error in field `{field}`: {message}")]
    Parse { field: String, message: String },

    /// The input parsed but violates a structural invariant.
    #[error("validation error in field `{field}`: {message}")]
    Validation { field: String, message: String },

    /// A truncation window reaches past the available gaps.
    #[error("window error: {0}")]
    Window(String),

    /// An evaluation horizon shorter than the interaction set.
    #[error("horizon error: requested {requested}, need at least {minimum}")]
    Horizon { requested: usize, minimum: usize },

    /// A generated gap is not strictly positive.
    #[error("gap error at index {index}: gap {value} is not positive")]
    Gap { index: usize, value: f64 },

    /// An index set refers outside the configuration.
    #[error("index error: {0}")]
    Index(String),

    /// A leading block required to be invertible is (numerically) singular.
    #[error("singular pivot: leading {size}x{size} block has negligible determinant")]
    SingularPivot { size: usize },

    /// Continued-fraction evaluation hit a zero denominator.
    #[error("division by zero in continued fraction at index {index}")]
    DivisionByZero { index: usize },

    /// Two interaction points snapped to the same finite-difference node.
    #[error("mesh error: {0}")]
    Mesh(String),

    /// The bound-state scan did not stabilize within the refinement budget.
    #[error("oracle did not converge: {0}")]
    NonConvergence(String),

    /// Operation is undefined for this input shape.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn parse(field: &str, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.to_string(),
            message: message.into(),
        }
    }
}
