use std::fmt;

use crate::fences::FenceMethod;

/// Errors raised by the statistics, distribution, and simulation layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,
    #[error("probability out of range")]
    ProbabilityOutOfRange,
    #[error("non-finite observation at position {0}")]
    NonFinite(usize),
    #[error("too few observations")]
    TooFewObservations,
    #[error("too few observations for fence method")]
    TooFewForFence,
    #[error("degenerate sample: zero spread")]
    ZeroSpread,
    #[error("degenerate sample: zero IQR")]
    ZeroIqr,
    #[error("degenerate sample: no observations on one side of the median")]
    EmptyHalf,
    #[error("medcouple out of range")]
    MedcoupleOutOfRange,
    #[error("uncapped skewness passed")]
    UncappedSkewness,
    #[error("bowley coefficient out of range")]
    BowleyOutOfRange,
    #[error("invalid quartiles: {0}")]
    InvalidQuartiles(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("non-finite {0}")]
    NonFiniteField(&'static str),
    #[error("no data")]
    NoData,
    #[error("{method}: {source}")]
    Method {
        method: FenceMethod,
        source: Box<Error>,
    },
    #[error("group {label:?}: {source}")]
    Group { label: String, source: Box<Error> },
}

impl Error {
    /// Strips method/group context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Method { source, .. } | Error::Group { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn in_method(self, method: FenceMethod) -> Error {
        Error::Method {
            method,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_group(self, label: impl fmt::Display) -> Error {
        Error::Group {
            label: label.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
