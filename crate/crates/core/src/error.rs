use num_complex::Complex64;
use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a jet whose leading coefficient vanishes (|v0| = {magnitude:e})")]
    DivisionByZeroJet { magnitude: f64 },

    #[error("jet orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },

    #[error("jet base points differ ({left} vs {right})")]
    BasePointMismatch { left: Complex64, right: Complex64 },

    #[error("derivative of order {requested} requested from a jet of order {order}")]
    OrderExceeded { requested: usize, order: usize },

    #[error("non-finite value produced by {context}")]
    NonFinite { context: &'static str },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{}", evaluation_message(*component, message))]
    Evaluation {
        component: Option<usize>,
        message: String,
    },

    /// f, f', ..., f^(n) are (numerically) linearly dependent at the point.
    #[error("degenerate curve: {what} = {magnitude:e} is below threshold {threshold:e}")]
    DegenerateCurve {
        what: &'static str,
        magnitude: f64,
        threshold: f64,
    },

    #[error("critical point: |u'| = {magnitude:e} is below threshold {threshold:e}")]
    CriticalPoint { magnitude: f64, threshold: f64 },

    #[error("chart escape: transformed leading component {magnitude:e} vanishes")]
    ChartEscape { magnitude: f64 },

    #[error("critical reparameterization: |z'| = {magnitude:e} is below threshold {threshold:e}")]
    CriticalReparameterization { magnitude: f64, threshold: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn evaluation_message(component: Option<usize>, message: &str) -> String {
    match component {
        Some(c) => format!("evaluation of component {c} failed: {message}"),
        None => format!("evaluation failed: {message}"),
    }
}

impl Error {
    pub(crate) fn in_component(self, index: usize) -> Error {
        match self {
            Error::Evaluation { message, .. } => Error::Evaluation {
                component: Some(index),
                message,
            },
            other => other,
        }
    }
}
