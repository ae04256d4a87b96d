//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by sequence construction, generators, metrics, and the
/// classifier.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions of two related inputs do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An argument violates its documented domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A frame or class index points outside its container.
    #[error("index out of range: {0}")]
    Index(String),

    /// A NaN or infinite value was found where finite data is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// A generator needs a prototype for a class that was never annotated.
    #[error("class {0} has no prototype; it never appears in the training annotations")]
    MissingPrototype(usize),

    /// Training was attempted with no labeled frames at all.
    #[error("no labeled frames to train on")]
    NoTrainingData,

    /// A model with no present class cannot predict.
    #[error("model has no present class")]
    EmptyModel,
}

pub type Result<T> = std::result::Result<T, Error>;
